#include <doctest.h>

#include <cmath>

#include "isostokes/errors.hpp"
#include "isostokes/golden.hpp"
#include "isostokes/io.hpp"
#include "isostokes/linalg.hpp"
#include "isostokes/ode.hpp"
#include "isostokes/special.hpp"
#include "isostokes/system.hpp"

using namespace iso;

TEST_CASE("gaussian rationals") {
  GaussQ a(Rational(1, 3), Rational(-2, 5));
  GaussQ b = GaussQ::frac(7, 4);
  CHECK((a * b) / b == a);
  CHECK(a - a == GaussQ(0));
  CHECK((a * a.conj()).im == 0);
  CHECK(parse_gauss(to_string(a)) == a);
  CHECK(parse_gauss("3") == GaussQ(3));
  CHECK(parse_gauss("-1/2*i") == GaussQ(0, Rational(-1, 2)));
  CHECK(rational_from_double(0.375) == Rational(3, 8));
  CHECK(GaussQ(4).is_integer());
  CHECK_FALSE(b.is_integer());
}

TEST_CASE("dense linear algebra") {
  CMat m(3, 3);
  m(0, 0) = 2; m(0, 1) = cd(0, 1); m(1, 1) = 3; m(1, 2) = 1; m(2, 0) = -1; m(2, 2) = cd(1, 1);
  CHECK(std::abs(det(m) - cd(2.0 * 3.0, 0) * cd(1, 1) - cd(-1, 0) * cd(0, 1) * 1.0) < 1e-14);
  CHECK((m * inverse(m) - CMat::identity(3)).max_abs() < 1e-14);
  // nilpotent exponential is a finite sum
  CMat n(2, 2);
  n(0, 1) = 5;
  CMat e = expm(n);
  CHECK(std::abs(e(0, 1) - 5.0) < 1e-14);
  CHECK(std::abs(e(0, 0) - 1.0) < 1e-14);
  auto d = CMat::diag({cd(0, kPi), cd(1, 0)});
  CHECK(std::abs(expm(d)(0, 0) + 1.0) < 1e-14);
  CHECK(std::abs(expm(d)(1, 1) - std::exp(1.0)) < 1e-13);
}

TEST_CASE("exponential integrals") {
  // reference values of E1(1) and Ei(1)
  CHECK(std::abs(expint_e1(1.0) - 0.21938393439552027) < 1e-15);
  CHECK(std::abs(expint_ei(1.0) - 1.8951178163559368) < 1e-14);
  // E1 near the origin: -gamma - log z + z
  cd z(1e-6, 2e-6);
  CHECK(std::abs(expint_e1(z) - (-0.5772156649015329 - std::log(z) + z)) < 1e-11);
  // one counterclockwise turn
  cd a = expint_e1_cover(2.0, 0.3), b = expint_e1_cover(2.0, 0.3 + 2 * kPi);
  CHECK(std::abs(b - a + cd(0, 2 * kPi)) < 1e-12);
  CHECK_THROWS_AS(expint_e1_checked(-2.0), Error);
}

TEST_CASE("Hankel functions") {
  // half-integer order is elementary
  for (double x : {0.7, 3.0, 14.0}) {
    cd want = cd(0, -1) * std::sqrt(2 / (kPi * x)) * std::exp(cd(0, x));
    CHECK(std::abs(hankel(1, 0.5, x, 0.0) - want) < 1e-12 * std::abs(want));
  }
  // two representations agree in their common range
  for (double r : {4.0, 8.0}) {
    for (double th : {0.2, 1.1}) {
      cd s = hankel_series(1, 0.75, r, th), i = hankel_integral(1, 0.75, r, th);
      CHECK(std::abs(s - i) < 1e-10 * std::abs(s));
    }
  }
  cd a = hankel_asymptotic(2, 0.75, 30.0, -0.4), w = hankel_integral(2, 0.75, 30.0, -0.4);
  CHECK(std::abs(a - w) < 1e-12 * std::abs(w));
}

TEST_CASE("adaptive integrator") {
  const cd lam(-0.3, 2.0);
  OdeRhs f = [&](double, const std::vector<cd>& y, std::vector<cd>& dy) { dy[0] = lam * y[0]; };
  auto y = dop853(f, 0.0, 5.0, {1.0});
  CHECK(std::abs(y[0] - std::exp(lam * 5.0)) < 1e-11);
  auto back = dop853(f, 5.0, 0.0, y);
  CHECK(std::abs(back[0] - 1.0) < 1e-10);
}

TEST_CASE("system description") {
  auto ei = ei_system();
  CHECK(ei.n == 2);
  CHECK(ei.exact());
  auto u = ei.u({0.25});
  CHECK(std::abs(u[1] - 0.25) < 1e-15);
  CHECK(std::abs(ei.A_at(1, {0.25})(1, 0) - 0.25) < 1e-15);
  CHECK(ei.A_at(2, {0.25}).max_abs() == 0);
  CHECK(ei.same_block(0, 1));
  CHECK_THROWS_AS(make_system(2, {0.0, 1.0}, {}, {CoefficientGenerator::constant(CoefMatrix(CMat(3, 3)))}), Error);
}

TEST_CASE("system from json") {
  json j = json::parse(R"({"n": 2, "u0": [0, 1], "A": [[["1/2", 0], [0, "-1/2"]]]})");
  auto sys = system_from_json(j);
  CHECK(sys.n == 2);
  CHECK(std::abs(sys.A_at(1, {})(0, 0) - 0.5) < 1e-15);
  CHECK(sys.exact());
  json p = json::parse(R"({"n": 2, "u0": [0, 0], "A": [[{"exps": [1], "matrix": [[0, 1], [0, 0]]}]]})");
  auto ps = system_from_json(p);
  CHECK(std::abs(ps.A_at(1, {cd(0.5), cd(0)})(0, 1) - 0.5) < 1e-15);
  json g = {{"golden", "ei"}};
  CHECK(system_from_json(g).n == 2);
  CHECK(config_hash(j) == config_hash(json::parse(j.dump())));
  CHECK(config_hash(j) != config_hash(g));
}
