#include <doctest.h>

#include <cmath>
#include <random>

#include "isostokes/connect.hpp"
#include "isostokes/golden.hpp"
#include "isostokes/isomono.hpp"
#include "isostokes/linalg.hpp"
#include "isostokes/painleve.hpp"

using namespace iso;

namespace {
double spectrum_gap(std::vector<cd> a, std::vector<cd> b) {
  double w = 0;
  for (cd x : a) {
    double m = INFINITY;
    for (cd y : b) m = std::min(m, std::abs(x - y));
    w = std::max(w, m);
  }
  return w;
}
}  // namespace

TEST_CASE("skew flow keeps the spectrum and the symmetry") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0.0, 1.0);
  CMat A(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) A(a, b) = 0.4 * cd(N(rng), N(rng));
  A = (A - A.transpose()) * cd(0.5);
  auto sys = make_system(3, {0.0, 2.0, cd(1, 2)}, {}, {CoefficientGenerator::constant(CoefMatrix(A))});
  std::vector<cd> t0(3, 0.0), t1{cd(0.1, 0.05), cd(-0.2, 0), cd(0, 0.15)};
  auto fl = flow(sys, A, {t0, t1});
  auto ev = eigenvalues(A);
  for (const auto& s : fl) {
    CHECK(spectrum_gap(s.eigenvalues, ev) < 1e-9);
    CHECK((s.A1 + s.A1.transpose()).max_abs() < 1e-9);
  }
  // vector field against a central difference
  const double h = 1e-4;
  auto tp = t0, tm = t0;
  tp[1] += h;
  tm[1] -= h;
  CMat d = (flow(sys, A, {t0, tp}).back().A1 - flow(sys, A, {t0, tm}).back().A1) * cd(1 / (2 * h));
  CMat an = deformation_field(sys, t0, A, 1);
  CHECK((d - an).max_abs() < 1e-6 * an.max_abs());
}

TEST_CASE("closed-form family solves the deformation equation") {
  auto fam = a3_family_closed_form();
  for (cd t : {cd(0.05), cd(0.1, 0.02)}) {
    const double h = 1e-4;
    CMat d = (fam.A_at(1, {t + h}) - fam.A_at(1, {t - h})) * cd(1 / (2 * h));
    CMat an = deformation_field(fam, {t}, fam.A_at(1, {t}), 0);
    CHECK((d - an).max_abs() < 1e-6 * an.max_abs());
  }
}

TEST_CASE("monodromy data is constant along the family") {
  auto fam = a3_family_system();
  SystemFamily f = [&](const std::vector<cd>& t) { return system_with_A1(fam, fam.A_at(1, t)); };
  auto dev = verify_isomonodromic(fam, f, {{0.05}, {0.1}, {cd(0.08, 0.02)}}, 0.0);
  CHECK(dev.pass);
  CHECK(dev.stokes < 1e-6);
}

TEST_CASE("Stokes data has a limit at the coalescence point") {
  auto rep = coalescence_limit(a3_family_system(), {0.0}, {1.0}, {0.08, 0.04, 0.02, 0.01}, 0.0);
  CHECK(rep.vanishing_pass);
  CHECK(rep.max_coalesced_entry < 1e-7);
  CHECK(rep.constancy < 1e-6);
  REQUIRE(rep.limit_vs_frozen >= 0);
  CHECK(rep.limit_vs_frozen < 1e-6);
  auto hk = a3_frozen_stokes_hankel();
  CHECK((rep.S_extrapolated[0] - hk.S1).max_abs() < 1e-6);
}

TEST_CASE("deformation form on the coalescence locus") {
  auto fam = a3_family_system();
  auto om = omega_form(fam, {0.0});
  CHECK(om.holomorphic);
  CMat A1(2, 2);
  A1(0, 1) = 1;
  auto bad = make_system(2, {0.0, 0.0}, {2}, {CoefficientGenerator::constant(CoefMatrix(A1))});
  CHECK_THROWS(omega_form(bad, {0.0, 0.0}, A1));
}
