#pragma once
// Isomonodromic deformation: the forms Omega_k and Theta0, the nonlinear
// flow of A1, constancy checks and coalescence limits.
#include <optional>
#include <string>
#include <vector>

#include "isostokes/cells.hpp"
#include "isostokes/connect.hpp"

namespace iso {

// E_k = d Lambda / d t_k = diag of column k of the eigenvalue map.
CMat deformation_direction(const SystemCoefficients& sys, int k);

struct DeformationForm {
  std::vector<cd> t;
  cd z{0, 0};
  CMat F1;                    // off-diagonal part (A1)_ab / (u_b - u_a)
  std::vector<CMat> Omega;    // z E_k + [F1, E_k]
  std::vector<CMat> Theta;    // [F1, E_k]
  bool holomorphic = true;    // every coalesced entry of A1 vanishes
  std::vector<std::pair<int, int>> limit_entries;  // coalesced pairs resolved as limits
};

// A1 given directly. Coalesced entries must vanish to tol; their F1 entries
// are then taken from the system family as a limit when one is supplied.
// Throws SingularAtDelta.
DeformationForm omega_form(const SystemCoefficients& sys, const std::vector<cd>& t, const CMat& A1, cd z = 0,
                           double tol = 1e-12);
// A1 = A_1(t) of the family; coalesced entries resolved by extrapolation along a separating direction.
DeformationForm omega_form(const SystemCoefficients& sys, const std::vector<cd>& t, cd z = 0, double tol = 1e-12);

// Right side of dA1/dt_k = [[F1, E_k], A1].
CMat deformation_field(const SystemCoefficients& sys, const std::vector<cd>& t, const CMat& A1, int k);

struct FlowSample {
  std::vector<cd> t;
  CMat A1;
  CMat G0;
  std::vector<cd> eigenvalues;
  std::string signature;
};

struct FlowParams {
  OdeOptions ode{1e-12, 1e-14};
  int samples_per_leg = 4;
  double tau_tilde = 0;
  double delta_tol = 1e-12;
};

// Straight legs between waypoints; G0 is co-integrated by dG0 = Theta0 G0.
// Throws BlowUp, DeltaHit.
std::vector<FlowSample> flow(const SystemCoefficients& sys, const CMat& A1_init,
                             const std::vector<std::vector<cd>>& waypoints, const FlowParams& fp = {},
                             std::optional<CMat> G0_init = std::nullopt);

// Same eigenvalue map with A1 fixed to the given matrix (constant in t).
SystemCoefficients system_with_A1(const SystemCoefficients& base, const CMat& A1);

struct IsomonodromyDeviation {
  std::vector<std::vector<cd>> samples;
  double stokes = 0;
  double connection = 0;  // row-normalized C0
  double B1 = 0;
  double tolerance = 0;
  bool pass = false;
  std::vector<MonodromyData> data;
};

// family(t) returns the system whose A1 is the deformed one at t.
using SystemFamily = std::function<SystemCoefficients(const std::vector<cd>&)>;

// Throws SamplesSpanCells when the samples do not share a tau~-cell.
IsomonodromyDeviation verify_isomonodromic(const SystemCoefficients& base, const SystemFamily& family,
                                           const std::vector<std::vector<cd>>& samples, double tau_tilde,
                                           const NumericsParams& p = {}, double tol = 1e-6);

// Canonical form of C0 modulo diagonal rescaling of the Levelt solution:
// each row divided by its entry at the column of largest modulus in ref.
CMat normalize_connection(const CMat& C0, const CMat& ref);

struct LimitSample {
  std::vector<cd> t;
  double h = 0;
  std::vector<CMat> S;
  double coalesced_entries = 0;  // max |S_ab| over pairs with u_a(0) = u_b(0)
  std::vector<double> F_norm;    // max |F_k| for k = 1..
};

struct LimitReport {
  std::vector<LimitSample> trace;
  std::vector<CMat> S_extrapolated;
  std::vector<CMat> S_frozen;
  double limit_vs_frozen = -1;     // -1 when the frozen system is unavailable
  double max_coalesced_entry = 0;
  double constancy = 0;            // max |S(t) - S(t_first)| over the trace
  bool vanishing_pass = false;
  std::vector<std::string> vanishing_failures;
  std::string frozen_error;
};

// Radial approach t = t_delta + h d for the given h values (largest first).
LimitReport coalescence_limit(const SystemCoefficients& sys, const std::vector<cd>& t_delta,
                              const std::vector<cd>& direction, const std::vector<double>& hs, double tau_tilde,
                              const NumericsParams& p = {}, int K_trace = 6);

}  // namespace iso
