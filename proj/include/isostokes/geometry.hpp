#pragma once
#include <limits>
#include <string>
#include <vector>

#include "isostokes/system.hpp"

namespace iso {

struct StokesRay {
  double direction = 0;  // on the universal cover
  int a = 0, b = 0;      // zero-based ordered pair
  bool unfolding = false;  // true when u_a(0) = u_b(0): ray absent at t = 0
};

// Rays 3pi/2 - arg_p(u_a - u_b) + 2 N pi inside (lo, hi], sorted by direction.
// With an explicit pair list a coalescent pair raises CoalescentPair;
// otherwise coalescent pairs are skipped.
std::vector<StokesRay> stokes_directions(const SystemCoefficients& sys, const std::vector<cd>& t, double lo,
                                         double hi, const std::vector<std::pair<int, int>>& pairs = {},
                                         double tol = 1e-12);

// Same on bare eigenvalues.
std::vector<StokesRay> stokes_directions_of(const std::vector<cd>& u, double lo, double hi, double tol = 1e-12);

struct StokesFan {
  double eta = 0;
  double tau = 0;  // 3pi/2 - eta
  std::vector<double> eta_basic;  // strictly decreasing inside (eta - 2pi, eta)
  std::vector<double> tau_basic;  // tau_nu = 3pi/2 - eta_nu, increasing inside (tau, tau + 2pi)
  int mu = 0;
  // tau_nu for any integer nu via tau_{nu + k mu} = tau_nu + k pi.
  double tau_at(int nu) const;
};

StokesFan build_fan(const SystemCoefficients& sys, double eta, double tol = 1e-12);

enum class SectorKind { S, S_t, S_hat_t, S_hat, Custom };

struct Sector {
  double right = -std::numeric_limits<double>::infinity();
  double left = std::numeric_limits<double>::infinity();
  SectorKind kind = SectorKind::Custom;
  double anchor = 0;  // middle of the defining half-plane, used when unbounded

  double opening() const { return left - right; }
  bool contains(double theta) const { return theta > right && theta < left; }
  bool contains(const Sector& s) const { return s.right >= right && s.left <= left; }
  // Midpoint, or the middle of the defining half-plane when unbounded.
  double bisector() const;
  Sector intersect(const Sector& o) const;
};

// Fan sector S(tau_nu - pi, tau_{nu+1}).
Sector fan_sector(const StokesFan& fan, int nu);

struct SectorPair {
  Sector S;      // S_{nu + k mu}(t): widened to the nearest rays of Lambda(t)
  Sector S_hat;  // widened to the nearest rays of pairs with u_a(0) != u_b(0)
  double tau_tilde = 0;
  int k = 0;
};

// Sector k contains the closed half-plane [tau_tilde - pi + k pi, tau_tilde + k pi].
SectorPair build_sector(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde, int k,
                        double tol = 1e-12);
Sector sector_from_rays(const std::vector<cd>& u, double tau_tilde, int k, double tol = 1e-12);

enum class Dominance { Dominant, Subdominant };

// Dominant iff Re((u_a - u_b) e^{i theta}) > 0.
Dominance dominance(const std::vector<cd>& u, int a, int b, double theta, double tol = 1e-12);

// True when some ray of Lambda(t) points along tau_tilde mod pi.
bool on_crossing_locus(const std::vector<cd>& u, double tau_tilde, double tol = 1e-12);

}  // namespace iso
