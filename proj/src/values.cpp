#include "qmu/values.hpp"

#include <algorithm>
#include <charconv>

namespace qmu {

ExtValue ext_mul(ExtValue a, ExtValue b) {
  if ((a.is_zero() && b.is_infinite()) || (a.is_infinite() && b.is_zero())) {
    throw ContractError("ext_mul: 0 * inf is undefined");
  }
  if (a.is_infinite() || b.is_infinite()) return kInfinity;
  return ExtValue(a.value() * b.value());
}

ExtValue ext_recip(ExtValue a) {
  if (a.is_zero()) return kInfinity;
  if (a.is_infinite()) return ExtValue::zero();
  return ExtValue(1.0 / a.value());
}

ExtValue ext_min(ExtValue a, ExtValue b) { return b < a ? b : a; }
ExtValue ext_max(ExtValue a, ExtValue b) { return a < b ? b : a; }

ExtValue ext_absdiff(ExtValue a, double c) {
  if (a.is_infinite()) return kInfinity;
  return ExtValue(std::fabs(a.value() - c));
}

namespace {

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ContractError("closeness tolerance must lie in (0, 1)");
  }
}

}  // namespace

bool eps_close(ExtValue k, ExtValue p, double eps) {
  require_eps(eps);
  if (p.is_infinite()) return k.value() >= 1.0 / eps;
  if (k.is_infinite()) return false;
  return std::fabs(k.value() - p.value()) <= eps;
}

bool eps_above(ExtValue k, ExtValue p, double eps) {
  require_eps(eps);
  // The smallest p' that is eps-close to p.
  if (p.is_infinite()) return k.value() >= 1.0 / eps;
  return k.value() >= std::max(0.0, p.value() - eps);
}

bool eps_below(ExtValue k, ExtValue p, double eps) {
  require_eps(eps);
  // inf itself is eps-close to inf, so nothing is excluded there.
  if (p.is_infinite()) return true;
  if (k.is_infinite()) return false;
  return k.value() <= p.value() + eps;
}

double closeness_gap(ExtValue k, ExtValue p) {
  if (p.is_infinite()) return ext_recip(k).value();
  if (k.is_infinite()) return std::numeric_limits<double>::infinity();
  return std::fabs(k.value() - p.value());
}

bool agree(ExtValue a, ExtValue b, double eps) {
  return eps_close(a, b, eps) || eps_close(b, a, eps);
}

double sup_distance(const std::vector<ExtValue>& a, const std::vector<ExtValue>& b) {
  if (a.size() != b.size()) throw ContractError("sup_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (a[i].is_infinite() || b[i].is_infinite()) {
      return std::numeric_limits<double>::infinity();
    }
    d = std::max(d, std::fabs(a[i].value() - b[i].value()));
  }
  return d;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_string(ExtValue v) { return format_number(v.value()); }

void SolverConfig::validate() const {
  if (!(tol_fix > 0 && tol_fix < 1)) throw InputError("tol_fix must lie in (0, 1)");
  if (!(tol_cmp > 0 && tol_cmp < 1)) throw InputError("tol_cmp must lie in (0, 1)");
  if (!(cap > 0) || std::isinf(cap)) throw InputError("divergence cap must be positive and finite");
  if (max_iters == 0) throw InputError("iteration budget must be positive");
}

}  // namespace qmu
