#pragma once
#include <string>
#include <vector>

#include "isostokes/system.hpp"

namespace iso {

struct CellSignature {
  double tau_tilde = 0;
  std::vector<std::pair<int, int>> pairs;  // a < b, zero-based
  std::vector<int> signs;                  // +1 / -1
  std::string str() const;                 // e.g. "(-,-,+)"
  friend bool operator<(const CellSignature& x, const CellSignature& y) { return x.signs < y.signs; }
  friend bool operator==(const CellSignature& x, const CellSignature& y) { return x.signs == y.signs; }
};

// L_ab(t) for the admissible direction tau_tilde, with eta~ = 3pi/2 - tau_tilde:
// (y_a - y_b) - tan(eta~)(x_a - x_b), or x_a - x_b when cos(eta~) = 0.
double wall_form(const std::vector<cd>& u, int a, int b, double tau_tilde);

// Pairs entering the signatures: those with u_a(0) = u_b(0).
std::vector<std::pair<int, int>> unfolding_pairs(const SystemCoefficients& sys);

CellSignature cell_signature(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde,
                             double tol = 1e-12);

enum class WallKind { Delta, Crossing, FixedPairCrossing };

struct CrossingEvent {
  double x = 0;  // path parameter in [0, 1]
  int a = 0, b = 0;
  WallKind wall = WallKind::Crossing;
  int from_sign = 0, to_sign = 0;
};

// Piecewise-linear path through the waypoints, parametrised uniformly
// by segment. Pairs with u_a(0) != u_b(0) are included when
// include_fixed_pairs is set, tagged FixedPairCrossing.
std::vector<CrossingEvent> detect_crossings(const SystemCoefficients& sys,
                                            const std::vector<std::vector<cd>>& waypoints, double tau_tilde,
                                            double tol = 1e-12, bool include_fixed_pairs = false);

struct CellEnumeration {
  int count = 0;
  bool exact = false;  // false for sampled enumeration
  std::vector<CellSignature> signatures;
  std::vector<std::vector<cd>> representatives;
  int samples = 0;
};

enum class CellScope { Local, Global };

// Local: polydisc |t_j| < epsilon0 and the unfolding pairs only.
// Global: the whole t-space and every pair whose form is not constant.
CellEnumeration enumerate_cells(const SystemCoefficients& sys, double tau_tilde, double epsilon0,
                                CellScope scope = CellScope::Local, int samples = 20000,
                                unsigned long long seed = 12345);

struct RadiusBound {
  double value = 0;
  bool unbounded = false;      // single eigenvalue group
  bool not_admissible = false;  // some pair gives zero
};

RadiusBound radius_bound(const SystemCoefficients& sys, double tau_tilde);

}  // namespace iso
