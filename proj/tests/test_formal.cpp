#include <doctest.h>

#include <cmath>

#include "isostokes/errors.hpp"
#include "isostokes/formal.hpp"
#include "isostokes/golden.hpp"

using namespace iso;

TEST_CASE("exponential integral system: exact coefficients") {
  auto sys = ei_system();
  for (auto [p, q] : {std::pair{1, 2}, std::pair{3, 10}, std::pair{7, 5}}) {
    Rational t(p, q);
    auto fs = formal_coefficients_exact(sys, {GaussQ(t)}, 8);
    REQUIRE(fs.Fq);
    CHECK(fs.mode == ArithmeticMode::Exact);
    CHECK((*fs.B1q)(0, 0) == GaussQ(1));
    CHECK((*fs.B1q)(1, 1) == GaussQ(2));
    // asymptotic series of e^{-x} Ei(x): (-1)^k k! t^{1-k}
    Rational fact = 1;
    for (int k = 1; k <= 8; ++k) {
      fact *= k;
      Rational want = (k % 2 ? -1 : 1) * fact;
      for (int j = 1; j < k; ++j) want /= t;
      CHECK((*fs.Fq)[std::size_t(k)](1, 0) == GaussQ(want));
      CHECK((*fs.Fq)[std::size_t(k)](0, 1) == GaussQ(0));
    }
    CHECK(recursion_residual_exact_zero(sys, {GaussQ(t)}, fs));
  }
}

TEST_CASE("floating coefficients agree with exact ones") {
  auto sys = ei_system();
  auto fe = formal_coefficients_exact(sys, {GaussQ::frac(1, 2)}, 6);
  auto ff = formal_coefficients(sys, {0.5}, 6);
  for (int k = 1; k <= 6; ++k)
    CHECK((ff.F[std::size_t(k)] - to_cmat((*fe.Fq)[std::size_t(k)])).max_abs() < 1e-10);
  CHECK(recursion_residual(sys, ff) < 1e-10);
}

TEST_CASE("coalescence is detected") {
  CHECK_THROWS_AS(formal_coefficients(ei_system(), {0.0}, 4), Error);
}

TEST_CASE("vanishing conditions") {
  auto vr = vanishing_report(ei_system(), {0.0}, 6);
  CHECK(vr.exact);
  CHECK_FALSE(vr.holomorphic);
  const ObstructionCheck* first = nullptr;
  for (const auto& ob : vr.obstructions)
    if (!ob.ok && (!first || ob.level < first->level)) first = &ob;
  REQUIRE(first);
  CHECK(first->level == 2);
  CHECK(first->exact_residual == "-2");
  // the frozen system itself is diagonal and fine
  CHECK(frozen_formal(ei_system(), {0.0}, 4).frozen);
  CMat A1(2, 2);
  A1(0, 1) = 1;
  A1(1, 1) = 0.5;
  auto bad = make_system(2, {0.0, 0.0}, {2}, {CoefficientGenerator::constant(CoefMatrix(A1))});
  CHECK_THROWS_AS(frozen_formal(bad, {0.0, 0.0}, 4), Error);

  auto fam = a3_family_system(20);
  auto vs = vanishing_report(fam, {0.0}, 6);
  CHECK(vs.holomorphic);
  CHECK(vs.failures.empty());
}

TEST_CASE("frozen solution is the limit of the family") {
  auto fam = a3_family_system(30);
  auto fz = frozen_formal(fam, {0.0}, 4);
  CHECK(fz.frozen);
  double prev = INFINITY;
  for (double h : {0.02, 0.01, 0.005}) {
    auto fs = formal_coefficients(fam, {h}, 4);
    double d = 0;
    for (int k = 1; k <= 4; ++k) d = std::max(d, (fs.F[std::size_t(k)] - fz.F[std::size_t(k)]).max_abs());
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-1);
}
