#include "isostokes/golden.hpp"

#include <cmath>

namespace iso {

namespace {

std::vector<std::vector<Num>> column_map(const std::vector<std::vector<int>>& m) {
  std::vector<std::vector<Num>> out;
  for (const auto& row : m) {
    std::vector<Num> r;
    for (int x : row) r.emplace_back(GaussQ(x));
    out.push_back(r);
  }
  return out;
}

std::vector<Num> exact_u0(const std::vector<GaussQ>& v) { return {v.begin(), v.end()}; }

CMat a3_v0(bool j_variant) {
  auto V = a3_v_taylor(0)[0];
  if (j_variant) {
    CMat J = CMat::diag({1.0, -1.0, 1.0});
    V = J * V * J;
  }
  return V;
}

}  // namespace

SystemCoefficients ei_system() {
  QMat D = QMat::diag({GaussQ(1), GaussQ(2)});
  QMat E(2, 2);
  E(1, 0) = GaussQ(1);
  auto gen = CoefficientGenerator::polynomial({{{0}, CoefMatrix(D)}, {{1}, CoefMatrix(E)}});
  auto s = make_system(2, exact_u0({0, 0}), {2}, {gen}, column_map({{0}, {1}}));
  s.label = "ei";
  return s;
}

SystemCoefficients a3_frozen_system(bool j_variant) {
  auto gen = CoefficientGenerator::constant(CoefMatrix(a3_v0(j_variant)));
  auto s = make_system(3, exact_u0({0, 0, 1}), {2, 1}, {gen}, column_map({{0}, {1}, {0}}));
  s.label = j_variant ? "a3-frozen-j" : "a3-frozen";
  return s;
}

SystemCoefficients a3_family_system(int degree, BranchChoice b) {
  auto Vk = a3_v_taylor(degree, b);
  std::vector<Monomial> terms;
  for (int k = 0; k <= degree; ++k) terms.push_back({{k}, CoefMatrix(Vk[std::size_t(k)])});
  auto s = make_system(3, exact_u0({0, 0, 1}), {2, 1}, {CoefficientGenerator::polynomial(std::move(terms))},
                       column_map({{0}, {1}, {0}}));
  s.label = "a3-family";
  return s;
}

SystemCoefficients a3_family_closed_form(BranchChoice b) {
  CMat V0 = a3_v_taylor(0, b)[0];
  auto f = [b, V0](const std::vector<cd>& t) {
    if (std::abs(t[0]) < 1e-12) return V0;
    auto [y, yp] = a3_branch(t[0]);
    return omegas_from_y(y, yp, t[0], -0.25, b).V();
  };
  auto s = make_system(3, exact_u0({0, 0, 1}), {2, 1}, {CoefficientGenerator::function(3, f)},
                       column_map({{0}, {1}, {0}}));
  s.label = "a3-family-closed";
  return s;
}

SystemCoefficients example1_system() {
  auto gen = CoefficientGenerator::constant(CoefMatrix(QMat(3, 3)));
  auto s = make_system(3, exact_u0({0, 0, 1}), {2, 1}, {gen}, column_map({{0}, {1}, {0}}));
  s.label = "example1";
  return s;
}

SystemCoefficients roots_system() {
  auto gen = CoefficientGenerator::constant(CoefMatrix(QMat(5, 5)));
  std::vector<std::vector<Num>> m = {{GaussQ(0)}, {GaussQ(1)}, {GaussQ::i()}, {GaussQ(-1)}, {GaussQ(0, -1)}};
  auto s = make_system(5, exact_u0({0, 0, 0, 0, 0}), {5}, {gen}, m);
  s.label = "roots";
  return s;
}

SystemCoefficients two_parameter_system() {
  auto gen = CoefficientGenerator::constant(CoefMatrix(QMat(3, 3)));
  auto s = make_system(3, exact_u0({0, 0, 0}), {3}, {gen}, column_map({{0, 0}, {1, 0}, {0, 1}}));
  s.label = "two-parameter";
  return s;
}

}  // namespace iso
