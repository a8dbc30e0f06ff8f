#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "qmu/io.hpp"

namespace qmu {

Json ext_to_json(ExtValue v) {
  if (v.is_infinite()) return "inf";
  const double x = v.value();
  if (x == std::floor(x) && x < 9.0e15) return static_cast<std::int64_t>(x);
  return x;
}

ExtValue ext_from_json(const Json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
  if (!j.is_number()) throw InputError(where + ": expected a number or \"inf\"");
  double x = j.get<double>();
  if (std::isnan(x) || x < 0.0) throw InputError(where + ": value must be nonnegative");
  return x;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

namespace {

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

const Json& array_field(const Json& obj, const char* key, const std::string& where) {
  const Json& a = field(obj, key, where);
  if (!a.is_array()) throw InputError(where + ": \"" + key + "\" must be an array");
  return a;
}

std::string string_field(const Json& obj, const char* key, const std::string& where) {
  const Json& s = field(obj, key, where);
  if (!s.is_string()) throw InputError(where + ": \"" + key + "\" must be a string");
  return s.get<std::string>();
}

double discount_field(const Json& obj, const std::string& where) {
  const Json& d = field(obj, "discount", where);
  if (!d.is_number()) throw InputError(where + ": discount must be a number");
  return d.get<double>();
}

}  // namespace

Qts qts_from_json(const Json& j) {
  Qts k;
  const Json& states = array_field(j, "states", "system");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "system.states[" + std::to_string(i) + "]";
    StateId s = k.add_state(string_field(states[i], "id", where));
    if (auto it = states[i].find("predicates"); it != states[i].end()) {
      if (!it->is_object()) throw InputError(where + ": predicates must be an object");
      for (const auto& [name, val] : it->items()) {
        k.set_predicate(name, s, ext_from_json(val, where + ".predicates." + name));
      }
    }
  }
  if (j.contains("edges")) {
    const Json& edges = array_field(j, "edges", "system");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string where = "system.edges[" + std::to_string(i) + "]";
      k.add_edge(k.find(string_field(edges[i], "from", where)),
                 k.find(string_field(edges[i], "to", where)), discount_field(edges[i], where));
    }
  }
  return k;
}

Json qts_to_json(const Qts& k) {
  Json states = Json::array();
  Json edges = Json::array();
  for (StateId s = 0; s < k.size(); ++s) {
    Json preds = Json::object();
    for (const auto& [name, vals] : k.predicates()) preds[name] = ext_to_json(vals[s]);
    states.push_back({{"id", k.id(s)}, {"predicates", preds}});
    for (const auto& t : k.successors(s)) {
      edges.push_back({{"from", k.id(s)}, {"to", k.id(t.to)}, {"discount", t.discount}});
    }
  }
  return {{"states", states}, {"edges", edges}};
}

Game game_from_json(const Json& j) {
  Game g;
  const Json& positions = array_field(j, "positions", "game");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::string where = "game.positions[" + std::to_string(i) + "]";
    const Json& p = positions[i];
    const Json& owner = field(p, "owner", where);
    if (!owner.is_number_integer() || (owner.get<int>() != 0 && owner.get<int>() != 1)) {
      throw InputError(where + ": owner must be 0 or 1");
    }
    const Json& prio = field(p, "priority", where);
    if (!prio.is_number_integer() || prio.get<long long>() < 0 || prio.get<long long>() > 1000000) {
      throw InputError(where + ": priority must be a natural number");
    }
    PositionId v = g.add_position(string_field(p, "id", where),
                                  owner.get<int>() == 0 ? Player::Zero : Player::One,
                                  prio.get<int>());
    if (auto it = p.find("payoff"); it != p.end()) {
      g.set_payoff(v, ext_from_json(*it, where + ".payoff"));
    }
  }
  if (j.contains("moves")) {
    const Json& moves = array_field(j, "moves", "game");
    for (std::size_t i = 0; i < moves.size(); ++i) {
      const std::string where = "game.moves[" + std::to_string(i) + "]";
      g.add_move(g.find(string_field(moves[i], "from", where)),
                 g.find(string_field(moves[i], "to", where)), discount_field(moves[i], where));
    }
  }
  g.validate();
  return g;
}

Json game_to_json(const Game& g, const std::vector<std::string>* labels) {
  Json positions = Json::array();
  Json moves = Json::array();
  for (PositionId v = 0; v < g.size(); ++v) {
    Json p = {{"id", g.id(v)},
              {"owner", g.owner(v) == Player::Zero ? 0 : 1},
              {"priority", g.priority(v)}};
    if (g.has_payoff(v)) p["payoff"] = ext_to_json(g.payoff(v));
    if (labels) p["formula"] = labels->at(v);
    positions.push_back(std::move(p));
    for (const auto& m : g.moves(v)) {
      moves.push_back({{"from", g.id(v)}, {"to", g.id(m.to)}, {"discount", m.discount}});
    }
  }
  return {{"positions", positions}, {"moves", moves}};
}

Json valuation_to_json(const std::vector<std::string>& ids, const Valuation& v) {
  if (ids.size() != v.size()) throw ContractError("valuation size does not match the id list");
  Json out = Json::object();
  for (std::size_t i = 0; i < ids.size(); ++i) out[ids[i]] = ext_to_json(v[i]);
  return out;
}

Json stage_log_to_json(const StageLog& log, const std::vector<std::string>& ids) {
  Json stages = Json::array();
  std::vector<std::string> names;
  for (PositionId v : log.truncated) names.push_back(ids.at(v));
  for (const auto& st : log.stages) stages.push_back(valuation_to_json(names, st));
  return {{"priority", log.priority},
          {"direction", log.ascending ? "ascending" : "descending"},
          {"stages", stages}};
}

Json report_to_json(const CheckReport& r, bool with_logs, const std::vector<std::string>& ids,
                    std::pair<const char*, const char*> labels) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"id", e.id},
                       {labels.first, ext_to_json(e.logic)},
                       {labels.second, ext_to_json(e.game)},
                       {"deviation", ext_to_json(e.deviation)},
                       {"ok", e.ok}});
  }
  Json out = {{"pass", r.pass},
              {"max_deviation", ext_to_json(r.max_deviation)},
              {"entries", entries},
              {"eval_iterations", r.eval_iterations},
              {"stage_steps", r.stage_steps},
              {"stage_logs", r.stage_logs.size()}};
  if (with_logs) {
    Json logs = Json::array();
    for (const auto& l : r.stage_logs) logs.push_back(stage_log_to_json(l, ids));
    out["stages"] = logs;
  }
  return out;
}

std::vector<std::string> position_ids(const Game& g) {
  std::vector<std::string> ids;
  for (PositionId v = 0; v < g.size(); ++v) ids.push_back(g.id(v));
  return ids;
}

}  // namespace qmu
