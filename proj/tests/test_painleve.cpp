#include <doctest.h>

#include <cmath>

#include "isostokes/errors.hpp"
#include "isostokes/painleve.hpp"

using namespace iso;

TEST_CASE("skew matrix and Omega coordinates") {
  std::array<cd, 3> w{cd(1, 2), cd(-0.5, 0), cd(0, 3)};
  CMat V = skew_from_omega(w);
  CHECK((V + V.transpose()).max_abs() == 0);
  auto back = omega_from_skew(V);
  for (int k = 0; k < 3; ++k) CHECK(back[std::size_t(k)] == w[std::size_t(k)]);
}

TEST_CASE("algebraic solution satisfies Painleve VI") {
  std::vector<cd> grid{cd(0.05), cd(0.1), cd(0.08, 0.04), cd(-0.1, 0.05)};
  auto y = [](cd t) { return a3_branch(t).first; };
  CHECK(pvi_residual(y, grid, -0.25) < 1e-7);
  // the branch vanishes at the origin
  CHECK(std::abs(a3_branch(1e-8).first) < 1e-6);
  CHECK_THROWS_AS(a3_branch(0.5), Error);
}

TEST_CASE("Taylor coefficients are exact and reproduce the branch") {
  auto c = a3_taylor_exact(20);
  cd t(0.05, 0.02), s = 0, p = 1;
  for (const auto& q : c) {
    p *= t;
    s += q.convert_to<double>() * p;
  }
  CHECK(std::abs(s - a3_branch(t).first) < 1e-12);
}

TEST_CASE("Omega flow conserves the quadratic invariant") {
  auto V = a3_v_taylor(30);
  cd t0 = 0.05;
  CMat V0(3, 3);
  cd p = 1;
  for (const auto& Vk : V) {
    V0 += Vk * p;
    p *= t0;
  }
  auto w = omega_from_skew(V0);
  auto tr = omega_flow(w, {t0, cd(0.1, 0.05), cd(0.15)}, 4);
  for (const auto& s : tr) CHECK(std::abs(s.invariant - tr.front().invariant) < 1e-10);
}

TEST_CASE("Hankel route for the frozen system") {
  auto hk = a3_frozen_stokes_hankel();
  CHECK(hk.cyclic_residual < 1e-10);
  CHECK(hk.displayed_cyclic_residual > 1.0);
  CHECK(hk.psi_residual < 1e-12);
  CMat J = CMat::diag({1.0, -1.0, 1.0});
  CHECK((hk.S1_bar - J * hk.S1 * J).max_abs() < 1e-14);
}

TEST_CASE("singular configurations") {
  CHECK_THROWS_AS(omegas_from_y(0.0, 1.0, 0.3), Error);
  CHECK_THROWS_AS(omegas_from_y(0.2, 1.0, 1.0), Error);
  auto st = omegas_from_y(0.2, 0.7, 0.4);
  CHECK(std::abs(st.y - 0.2) < 1e-15);
}
