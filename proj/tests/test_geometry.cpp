#include <doctest.h>

#include <cmath>

#include "isostokes/errors.hpp"
#include "isostokes/geometry.hpp"
#include "isostokes/golden.hpp"

using namespace iso;

TEST_CASE("rays of a two-level system") {
  std::vector<cd> u{0.0, 1.0};
  auto rays = stokes_directions_of(u, 0.0, 2 * kPi);
  REQUIRE(rays.size() == 2);
  // Re((u_a - u_b) z) changes sign on the imaginary axis
  CHECK(std::abs(rays[0].direction - kPi / 2) < 1e-14);
  CHECK(std::abs(rays[1].direction - 3 * kPi / 2) < 1e-14);
  CHECK(rays[0].a != rays[1].a);
  // one extra turn repeats them
  CHECK(stokes_directions_of(u, 0.0, 4 * kPi).size() == 4);
}

TEST_CASE("dominance follows the exponent") {
  std::vector<cd> u{0.0, 1.0};
  CHECK(dominance(u, 1, 0, 0.0) == Dominance::Dominant);
  CHECK(dominance(u, 0, 1, 0.0) == Dominance::Subdominant);
  CHECK(dominance(u, 0, 1, kPi) == Dominance::Dominant);
}

TEST_CASE("sectors contain a closed half-plane") {
  std::vector<cd> u{0.0, cd(1, 0.5), cd(-0.3, 2)};
  const double tt = 0.4;
  for (int k = 0; k < 3; ++k) {
    auto s = sector_from_rays(u, tt, k);
    CHECK(s.right < tt - kPi + k * kPi);
    CHECK(s.left > tt + k * kPi);
    CHECK(s.opening() > kPi);
    CHECK(s.opening() < 2 * kPi);
  }
  CHECK_FALSE(on_crossing_locus(u, tt));
  auto rays = stokes_directions_of(u, -kPi, kPi);
  CHECK(on_crossing_locus(u, rays[0].direction));
}

TEST_CASE("fan of the frozen A3 system") {
  auto sys = a3_frozen_system();
  auto fan = build_fan(sys, 0.3);
  CHECK(fan.mu >= 1);
  CHECK(std::abs(fan.tau - (1.5 * kPi - 0.3)) < 1e-14);
  for (std::size_t i = 1; i < fan.tau_basic.size(); ++i) CHECK(fan.tau_basic[i] > fan.tau_basic[i - 1]);
  CHECK(std::abs(fan.tau_at(fan.mu) - fan.tau_at(0) - kPi) < 1e-14);
  CHECK_THROWS_AS(build_fan(sys, 0.0), Error);
}
