#include <doctest.h>

#include <cmath>

#include "isostokes/errors.hpp"
#include "isostokes/golden.hpp"
#include "isostokes/levelt.hpp"
#include "isostokes/linalg.hpp"

using namespace iso;

TEST_CASE("exponent decomposition") {
  auto ex = exponents_of({0.25, -1.75, cd(0.5, 1.0)});
  REQUIRE(ex.D0.size() == 3);
  CHECK(ex.D0[0] == 0);
  CHECK(ex.D0[1] == -2);
  CHECK(ex.D0[2] == 0);
  CHECK(std::abs(ex.S0[1] - 0.25) < 1e-15);
  REQUIRE(ex.lattice.size() == 1);
  CHECK(ex.lattice[0].l == 2);
}

TEST_CASE("Levelt solution solves the system") {
  auto sys = a3_frozen_system();
  auto lv = levelt_series(sys, {0.0}, 60);
  CMat Lam = sys.Lambda({0.0}), A1 = sys.A_at(1, {0.0});
  for (double th : {0.3, 2.0}) {
    const double r = 0.8, h = 1e-5;
    cd z = std::polar(r, th);
    CMat dY = (lv.evaluate(r + h, th) - lv.evaluate(r - h, th)) * cd(1 / (2 * h)) * std::polar(1.0, -th);
    CMat rhs = (Lam + A1 * (1.0 / z)) * lv.evaluate(r, th);
    CHECK((dY - rhs).max_abs() < 1e-7 * rhs.max_abs());
  }
  // monodromy around the origin
  CMat a = lv.evaluate(0.5, 0.1), b = lv.evaluate(0.5, 0.1 + 2 * kPi);
  CHECK((b - a * lv.monodromy_exponent_matrix()).max_abs() < 1e-10 * a.max_abs());
  CHECK(lv.diag_residual < 1e-12);
}

TEST_CASE("Levelt solution of the exponential integral system") {
  // u = (0, t), A1 = [[1, 0], [t, 2]]; the first column is z e^{0} exactly
  auto lv = levelt_series(ei_system(), {0.5}, 60);
  CMat y = lv.evaluate(0.7, 0.4);
  cd z = std::polar(0.7, 0.4);
  // every solution's first component is a multiple of z
  cd c = y(0, 0) / z;
  CMat y2 = lv.evaluate(0.3, 0.4);
  CHECK(std::abs(y2(0, 0) - c * std::polar(0.3, 0.4)) < 1e-12);
}

TEST_CASE("invalid input") {
  CMat J(2, 2);
  J(0, 1) = 1;
  CHECK_THROWS_AS(levelt_series(CMat::diag({0.0, 1.0}), J, 10), Error);
}
