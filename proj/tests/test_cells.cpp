#include <doctest.h>

#include <cmath>

#include "isostokes/cells.hpp"
#include "isostokes/errors.hpp"
#include "isostokes/golden.hpp"

using namespace iso;

namespace {
int count(const SystemCoefficients& sys, CellScope scope) {
  auto rb = radius_bound(sys, 0.0);
  return enumerate_cells(sys, 0.0, rb.unbounded ? 1.0 : 0.9 * rb.value, scope).count;
}
}  // namespace

TEST_CASE("cell counts of the reference arrangements") {
  CHECK(count(roots_system(), CellScope::Local) == 8);
  CHECK(count(example1_system(), CellScope::Local) == 2);
  CHECK(count(example1_system(), CellScope::Global) == 3);
}

TEST_CASE("three dependent walls in two complex parameters") {
  auto sys = two_parameter_system();
  auto e = enumerate_cells(sys, 0.1, 1.0, CellScope::Local);
  // the three wall normals span a plane, so the central arrangement has six regions
  CHECK(e.count == 6);
  CHECK(e.signatures.size() == std::size_t(e.count));
  for (std::size_t i = 0; i < e.representatives.size(); ++i) {
    auto sig = cell_signature(sys, e.representatives[i], 0.1);
    CHECK(sig == e.signatures[i]);
  }
}

TEST_CASE("wall form and signatures") {
  std::vector<cd> u{0.0, cd(0.2, 0.1)};
  // tau~ = 3pi/2 gives eta~ = 0: the form is y_a - y_b
  CHECK(std::abs(wall_form(u, 0, 1, 1.5 * kPi) + 0.1) < 1e-15);
  auto sys = example1_system();
  auto pos = cell_signature(sys, {cd(0.1, 0.05)}, 0.0);
  auto neg = cell_signature(sys, {cd(-0.1, -0.05)}, 0.0);
  CHECK(pos.str().size() >= 3);
  CHECK_FALSE(pos == neg);
}

TEST_CASE("crossings along a path") {
  auto sys = example1_system();
  std::vector<std::vector<cd>> path{{cd(0.1, 0.1)}, {cd(-0.1, -0.1)}};
  auto ev = detect_crossings(sys, path, 0.0);
  REQUIRE_FALSE(ev.empty());
  // the wall is Re t = 0
  CHECK(std::abs(ev[0].x - 0.5) < 1e-12);
  CHECK(ev[0].from_sign == -ev[0].to_sign);
}

TEST_CASE("radius bound") {
  auto rb = radius_bound(example1_system(), 0.0);
  CHECK_FALSE(rb.unbounded);
  CHECK(rb.value > 0);
}
