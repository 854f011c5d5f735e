#pragma once
#include <optional>
#include <vector>

#include "isostokes/formal.hpp"
#include "isostokes/geometry.hpp"
#include "isostokes/levelt.hpp"
#include "isostokes/ode.hpp"

namespace iso {

// A point of the universal cover of the punctured z-plane.
struct CoverPoint {
  double r = 1;
  double theta = 0;
  cd value() const { return std::polar(r, theta); }
  cd log() const { return {std::log(r), theta}; }
};

struct NumericsParams {
  int K = -1;           // truncation order; -1: optimal, capped by K_cap
  int K_cap = 40;
  double R = 0;         // matching radius; 0: chosen from the eigenvalue gaps
  double R_scale = 20;  // auto radius R = R_scale / min gap, clamped to [R_min_auto, R_max_auto]
  double R_min_auto = 30;
  double R_max_auto = 5000;
  double r0 = 1.0;      // radius where the Levelt series is used
  double r_min = 0.05;  // paths stay outside this radius
  int levelt_L = 80;
  double margin = 0.3;  // angular distance kept from sector boundaries
  OdeOptions ode{};
};

struct FormalValue {
  CMat Y;
  std::vector<int> K_used;        // per column
  std::vector<double> error;      // first omitted term, relative to the column scale
};

// (I + sum F_k z^{-k}) z^{B1} e^{Lambda z}, truncated per column.
FormalValue evaluate_formal(const FormalSolution& fs, CoverPoint z, int K = -1, int K_cap = 40,
                            double r_min = 0);
// Same with the exponential e^{u_j z} of each column dropped.
FormalValue evaluate_formal_scaled(const FormalSolution& fs, CoverPoint z, int K = -1, int K_cap = 40);

struct PropagateReport {
  CMat Y;
  double wronskian_residual = 0;  // |det Y_to / (det Y_from exp(int tr A)) - 1|
  OdeStats stats;
};

// Log-linear path between cover points: z(s) = exp((1-s) log z0 + s log z1).
PropagateReport propagate(const SystemCoefficients& sys, const std::vector<cd>& t, CoverPoint from, CoverPoint to,
                          const CMat& Y_from, const NumericsParams& p = {});
// Several legs in sequence.
PropagateReport propagate_path(const SystemCoefficients& sys, const std::vector<cd>& t,
                               const std::vector<CoverPoint>& path, const CMat& Y_from,
                               const NumericsParams& p = {});

struct ConnectionResult {
  std::vector<CMat> C;         // C_1, C_2, ...
  std::vector<Sector> sectors;
  std::vector<std::vector<double>> directions;  // start direction per sector and column
  std::vector<std::vector<double>> column_error;  // error estimates
  double R = 0;
  LeveltData levelt;
  FormalSolution formal;
  CMat B1;
  std::vector<cd> u;
  bool frozen = false;
};

// Connection matrices Y_r = Y0 C_r for sectors r = 1..count (k = 0..count-1).
// Throws OnCrossingLocus, MatchingIllConditioned.
ConnectionResult connection_matrices(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde,
                                     const NumericsParams& p = {}, int count = 4);

struct StokesQuality {
  double unit_diagonal = 0;      // max |S_aa - 1|
  double off_pattern = 0;        // max |S_ab| over pairs forbidden by dominance
  double det_residual = 0;       // max |det S - 1|
  double max_column_error = 0;
  double connection_condition = 0;
};

struct MonodromyData {
  std::vector<CMat> S;  // S[0] = S_nu, S[1] = S_{nu+mu}, S[2] = S_{nu+2mu}
  std::vector<CMat> C;
  CMat B1;
  CMat C0;  // = C[0]
  LeveltData levelt;
  std::vector<cd> u;
  double tau_tilde = 0;
  std::vector<Sector> sectors;
  StokesQuality quality;
  double R = 0;
};

MonodromyData stokes_matrices(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde,
                              const NumericsParams& p = {});

struct ConsistencyReport {
  double constraint = 0;  // |S_{nu-mu}^{-1} e^{2pi i B1} S_nu^{-1} - C0^{-1} e^{2pi i L0} C0|
  double round_trip = -1;  // |S_nu S_{nu+mu} e^{-2 pi i B1} - M_inf (propagated)|, -1 when not computed
  double third = -1;       // |S_{nu+2mu} - e^{-2pi i B1} S_nu e^{2 pi i B1}|
  double wronskian = 0;
  CMat M_inf_stokes, M_inf_levelt, M_inf_numeric;
};

// With a system the round trip |z| = r0 is propagated numerically.
ConsistencyReport monodromy_consistency(const MonodromyData& d, const SystemCoefficients* sys = nullptr,
                                        const std::vector<cd>& t = {}, const NumericsParams& p = {});

struct RemainderDecay {
  int K = 0;
  std::vector<double> r;          // decreasing radii
  std::vector<double> remainder;  // max over columns of |Y e^{-u_j z} z^{-B1} - (I + sum_{k<=K} F_k z^{-k})|
  double slope = 0;               // fitted d log remainder / d log r, about -(K + 1)
};

// Truncation remainder of the formal series against the actual solutions of
// sector 1, along each column's matching direction.
RemainderDecay remainder_decay(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde, int K,
                               const std::vector<double>& radii, const NumericsParams& p = {});

}  // namespace iso
