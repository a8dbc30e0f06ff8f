#include <doctest.h>

#include <cmath>
#include <random>

#include "qmu/values.hpp"

using namespace qmu;

TEST_CASE("products on the extended reals") {
  CHECK(ext_mul(2, 3) == ExtValue(6));
  CHECK(ext_mul(0.5, kInfinity) == kInfinity);
  CHECK(ext_mul(1, 7.25) == ExtValue(7.25));
  CHECK(ext_mul(kInfinity, kInfinity) == kInfinity);
  CHECK_THROWS_AS(ext_mul(0, kInfinity), ContractError);
  CHECK_THROWS_AS(ext_mul(kInfinity, 0), ContractError);
}

TEST_CASE("construction rejects NaN and negatives") {
  CHECK_THROWS_AS(ExtValue(std::nan("")), ContractError);
  CHECK_THROWS_AS(ExtValue(-1.0), ContractError);
  CHECK(ExtValue(std::numeric_limits<double>::infinity()).is_infinite());
}

TEST_CASE("reciprocal") {
  CHECK(ext_recip(0) == kInfinity);
  CHECK(ext_recip(kInfinity) == ExtValue::zero());
  CHECK(ext_recip(4) == ExtValue(0.25));
}

TEST_CASE("reciprocal is an order-reversing involution") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(-12, 12);
  for (int i = 0; i < 1000; ++i) {
    ExtValue x = std::pow(10.0, mag(rng));
    ExtValue y = std::pow(10.0, mag(rng));
    ExtValue back = ext_recip(ext_recip(x));
    CHECK(std::fabs(back.value() - x.value()) <= std::nextafter(x.value(), INFINITY) - x.value());
    if (x <= y) CHECK(ext_recip(y) <= ext_recip(x));
  }
  CHECK(ext_recip(ext_recip(0)) == ExtValue::zero());
  CHECK(ext_recip(ext_recip(kInfinity)) == kInfinity);
}

TEST_CASE("closeness") {
  CHECK(eps_close(10, kInfinity, 0.1));
  CHECK_FALSE(eps_close(kInfinity, 5, 0.5));
  CHECK(eps_close(1.05, 1.0, 0.05 + 1e-15));
  CHECK(eps_close(kInfinity, kInfinity, 0.1));
  CHECK_FALSE(eps_close(9.99, kInfinity, 0.1));
  CHECK_THROWS_AS(eps_close(1, 1, 0.0), ContractError);
  CHECK_THROWS_AS(eps_close(1, 1, 1.0), ContractError);
}

TEST_CASE("above and below") {
  CHECK(eps_above(kInfinity, 3, 0.1));
  CHECK(eps_above(2.95, 3, 0.1));
  CHECK_FALSE(eps_above(2.5, 3, 0.1));
  CHECK(eps_above(10, kInfinity, 0.1));
  CHECK_FALSE(eps_above(9, kInfinity, 0.1));
  CHECK(eps_below(0, 3, 0.1));
  CHECK(eps_below(3.05, 3, 0.1));
  CHECK_FALSE(eps_below(kInfinity, 3, 0.1));
  CHECK(eps_below(kInfinity, kInfinity, 0.1));
}

TEST_CASE("gap and agreement") {
  CHECK(closeness_gap(3, 5) == 2.0);
  CHECK(closeness_gap(4, kInfinity) == 0.25);
  CHECK(closeness_gap(kInfinity, kInfinity) == 0.0);
  CHECK(std::isinf(closeness_gap(kInfinity, 2)));
  CHECK(agree(kInfinity, 1e7, 1e-6));
  CHECK(agree(1e7, kInfinity, 1e-6));
  CHECK_FALSE(agree(1e5, kInfinity, 1e-6));
}

TEST_CASE("scaling a close pair keeps it close after correcting by D") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> logd(-4, 4);
  for (int i = 0; i < 2000; ++i) {
    double eps = 0.01 + 0.9 * u(rng);
    double delta = std::pow(2.0, logd(rng));
    double d = std::max(delta, 1 / delta);
    ExtValue y = u(rng) < 0.2 ? kInfinity : ExtValue(10 * u(rng));
    double raw = y.is_infinite() ? d / eps * (1 + u(rng))
                                 : y.value() + (u(rng) - 0.5) * 2 * eps / d * 0.999;
    if (raw < 0) continue;
    ExtValue x = raw;
    REQUIRE(eps_close(x, y, eps / d));
    CHECK(eps_close(ext_mul(delta, x), ext_mul(delta, y), eps));
  }
}

TEST_CASE("two half-eps steps make one eps step") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double eps = 0.01 + 0.9 * u(rng);
    double z = 5 * u(rng);
    double y = z + (u(rng) - 0.5) * eps;
    double x = y + (u(rng) - 0.5) * eps;
    if (x < 0 || y < 0) continue;
    if (eps_close(x, y, eps / 2) && eps_close(y, z, eps / 2)) CHECK(eps_close(x, z, eps));
    if (eps_above(x, y, eps / 2) && eps_above(y, z, eps / 2)) CHECK(eps_above(x, z, eps));
    if (eps_below(x, y, eps / 2) && eps_below(y, z, eps / 2)) CHECK(eps_below(x, z, eps));
  }
  // the infinite case: 1/(eps/2) above a value that is itself far above
  CHECK(eps_close(40, kInfinity, 0.05));
}

TEST_CASE("sup distance") {
  CHECK(sup_distance({1, 2}, {1.5, 2}) == 0.5);
  CHECK(sup_distance({kInfinity}, {kInfinity}) == 0.0);
  CHECK(std::isinf(sup_distance({kInfinity}, {3})));
  CHECK_THROWS_AS(sup_distance({1}, {1, 2}), ContractError);
}

TEST_CASE("number text") {
  CHECK(format_number(3) == "3");
  CHECK(format_number(0.1) == "0.1");
  CHECK(to_string(kInfinity) == "inf");
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol_fix = 0;
  CHECK_THROWS(c.validate());
  c = {};
  c.max_iters = 0;
  CHECK_THROWS(c.validate());
}
