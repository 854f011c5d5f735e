#include <doctest.h>

#include <cmath>
#include <random>

#include "isostokes/connect.hpp"
#include "isostokes/errors.hpp"
#include "isostokes/golden.hpp"
#include "isostokes/linalg.hpp"
#include "isostokes/painleve.hpp"

using namespace iso;

TEST_CASE("Stokes matrices of the exponential integral system") {
  auto sys = ei_system();
  for (double t : {0.3, 0.5, 1.2}) {
    auto d = stokes_matrices(sys, {t}, 0.0);
    // only the jump of Ei across its cut survives
    CMat want = CMat::identity(2);
    want(1, 0) = cd(0, 2 * kPi * t * t);
    CHECK((d.S[1] - want).max_abs() < 1e-8);
    CHECK((d.S[0] - CMat::identity(2)).max_abs() < 1e-8);
    auto c = monodromy_consistency(d, &sys, {t});
    CHECK(c.constraint < 1e-8);
    CHECK(c.round_trip < 1e-8);
    CHECK(c.third < 1e-8);
  }
}

TEST_CASE("frozen A3 system against the Hankel route") {
  auto d = stokes_matrices(a3_frozen_system(), {0.0}, 0.0);
  auto hk = a3_frozen_stokes_hankel();
  CHECK((d.S[0] - hk.S1).max_abs() < 1e-8);
  CHECK((d.S[1] - hk.S2).max_abs() < 1e-8);
  CMat S1 = CMat::identity(3), S2 = CMat::identity(3);
  S1(0, 2) = -1;
  S1(1, 2) = 1;
  S2(2, 0) = 1;
  S2(2, 1) = -1;
  CHECK((hk.S1 - S1).max_abs() < 1e-10);
  CHECK((hk.S2 - S2).max_abs() < 1e-10);
}

TEST_CASE("random systems have triangular unit Stokes matrices") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    int n = 2 + i % 2;
    std::vector<Num> u0;
    for (int a = 0; a < n; ++a) u0.emplace_back(std::polar(2.0, 2 * kPi * a / n + 0.3 * N(rng)));
    CMat A(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) A(a, b) = 0.5 * cd(N(rng), N(rng));
    auto sys = make_system(n, u0, {}, {CoefficientGenerator::constant(CoefMatrix(A))});
    auto d = stokes_matrices(sys, std::vector<cd>(std::size_t(n), 0.0), 0.1);
    CHECK(d.quality.unit_diagonal < 1e-8);
    CHECK(d.quality.off_pattern < 1e-8);
    CHECK(d.quality.det_residual < 1e-8);
  }
}

TEST_CASE("propagation against an explicit solution") {
  // A1 diagonal: Y = z^{A1} e^{Lambda z}
  CMat A1 = CMat::diag({0.3, cd(-0.2, 0.1)});
  auto sys = make_system(2, {0.0, 1.0}, {}, {CoefficientGenerator::constant(CoefMatrix(A1))});
  auto exact = [&](CoverPoint z) {
    cd lz = std::log(z.r) + cd(0, z.theta), zz = std::exp(lz);
    return CMat::diag({std::exp(A1(0, 0) * lz), std::exp(A1(1, 1) * lz + zz)});
  };
  CoverPoint a{1.0, 0.2}, b{5.0, 2.5};
  auto rep = propagate(sys, {0.0, 0.0}, a, b, exact(a));
  CHECK((rep.Y - exact(b)).max_abs() < 1e-9 * exact(b).max_abs());
  CHECK(rep.wronskian_residual < 1e-9);
}

TEST_CASE("formal remainder decays at the truncation order") {
  for (int K : {1, 2, 3}) {
    auto rd = remainder_decay(ei_system(), {0.5}, 0.0, K, {40, 28, 20, 14, 10});
    CHECK(-rd.slope >= K - 0.1);
  }
}

TEST_CASE("matching on a crossing direction is refused") {
  auto sys = ei_system();
  auto rays = stokes_directions_of(sys.u({0.5}), -kPi, kPi);
  REQUIRE_FALSE(rays.empty());
  CHECK_THROWS_AS(connection_matrices(sys, {0.5}, rays[0].direction), Error);
}
