#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qmu/bridge.hpp"
#include "qmu/games.hpp"
#include "qmu/semantics.hpp"

namespace qmu {

using Json = nlohmann::ordered_json;

// A number, or the string "inf".
Json ext_to_json(ExtValue v);
ExtValue ext_from_json(const Json& j, const std::string& where);

/// Reads and parses a JSON file; every failure is an InputError.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);

Qts qts_from_json(const Json& j);
Json qts_to_json(const Qts& k);

Game game_from_json(const Json& j);
/// `labels`, when given, adds a "formula" field to every position.
Json game_to_json(const Game& g, const std::vector<std::string>* labels = nullptr);

Json valuation_to_json(const std::vector<std::string>& ids, const Valuation& v);

Json stage_log_to_json(const StageLog& log, const std::vector<std::string>& ids);
/// `labels` names the two compared columns of every entry.
Json report_to_json(const CheckReport& r, bool with_logs, const std::vector<std::string>& ids = {},
                    std::pair<const char*, const char*> labels = {"logic", "game"});

std::vector<std::string> position_ids(const Game& g);

}  // namespace qmu
