#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmu {

// Error hierarchy. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: JSON documents, formula text, out-of-range fields.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An iterative computation exhausted its budget before stabilizing.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A nonnegative extended real: a finite double >= 0, or infinity.
///
/// NaN and negative magnitudes are rejected at construction, so every
/// ExtValue in the program is a point of the lattice [0, inf].
class ExtValue {
 public:
  constexpr ExtValue() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  ExtValue(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw ContractError("ExtValue must be a nonnegative number or infinity");
    }
  }

  static constexpr ExtValue infinity() {
    ExtValue r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }
  static constexpr ExtValue zero() { return ExtValue(); }

  constexpr double value() const { return v_; }
  constexpr bool is_infinite() const {
    return v_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const { return !is_infinite(); }
  constexpr bool is_zero() const { return v_ == 0.0; }

  friend constexpr bool operator==(ExtValue a, ExtValue b) { return a.v_ == b.v_; }
  friend constexpr std::partial_ordering operator<=>(ExtValue a, ExtValue b) {
    return a.v_ <=> b.v_;
  }

 private:
  double v_ = 0.0;
};

inline constexpr ExtValue kInfinity = ExtValue::infinity();

/// Product on [0, inf]. The combination 0 * inf is a contract violation.
ExtValue ext_mul(ExtValue a, ExtValue b);

/// The negation operator: 1/x, with 0 <-> inf.
ExtValue ext_recip(ExtValue a);

ExtValue ext_min(ExtValue a, ExtValue b);
ExtValue ext_max(ExtValue a, ExtValue b);

/// |a - c| for a in [0, inf] and finite c >= 0.
ExtValue ext_absdiff(ExtValue a, double c);

// k is eps-close to p: p finite and |k - p| <= eps, or p = inf and k >= 1/eps.
// All three require eps in (0, 1).
bool eps_close(ExtValue k, ExtValue p, double eps);
// k >= p' for some p' that is eps-close to p.
bool eps_above(ExtValue k, ExtValue p, double eps);
// k <= p' for some p' that is eps-close to p.
bool eps_below(ExtValue k, ExtValue p, double eps);

/// The least eps for which eps_close(k, p, eps) holds, ignoring the (0,1)
/// restriction: |k - p| for finite p, 1/k for p = inf. Used as the deviation
/// figure in cross-check reports.
double closeness_gap(ExtValue k, ExtValue p);

/// eps_close in at least one direction. Symmetric agreement test for two
/// independently computed values.
bool agree(ExtValue a, ExtValue b, double eps);

/// Sup-norm distance between two valuations of equal size; a coordinate where
/// exactly one side is infinite contributes infinity.
double sup_distance(const std::vector<ExtValue>& a, const std::vector<ExtValue>& b);

/// Shortest decimal text that round-trips to the same double, "inf" for infinity.
std::string to_string(ExtValue v);
std::string format_number(double v);

/// Tolerances and budgets shared by every iterative solver.
struct SolverConfig {
  double tol_fix = 1e-9;     // sup-norm change at which an iteration has stabilized
  double tol_cmp = 1e-6;     // tolerance for cross-checks between pipelines
  double cap = 1e12;         // ascending iterates above this are promoted to inf
  std::size_t max_iters = 10000;

  void validate() const;
};

}  // namespace qmu
