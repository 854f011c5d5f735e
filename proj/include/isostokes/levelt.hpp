#pragma once
// Levelt normal form at the Fuchsian point z = 0 for diagonalizable A_1:
//   Y0(z) = G0 (I + sum_l Psi_l z^l) z^D0 z^L0,  L0 = S0 + R0.
#include <vector>

#include "isostokes/linalg.hpp"
#include "isostokes/system.hpp"

namespace iso {

struct Resonance {
  int i = 0, j = 0;  // zero-based, mu_i - mu_j = l
  int l = 0;
};

struct LeveltExponents {
  std::vector<cd> mu;
  std::vector<int> D0;
  std::vector<cd> S0;  // rho_i with 0 <= Re rho_i < 1
  std::vector<Resonance> lattice;
  bool ill_conditioned = false;  // some difference lies in the near-resonance band
};

// Decomposition of given eigenvalues (no sorting).
LeveltExponents exponents_of(const std::vector<cd>& mu, double tol = 1e-9);

struct LeveltData {
  CMat G0;
  LeveltExponents ex;
  CMat R0;
  std::vector<CMat> Psi;  // Psi[0] = I
  CMat Lambda_tilde;      // G0^{-1} Lambda G0
  double diag_residual = 0;

  int n() const { return G0.rows(); }
  CMat D0() const;
  CMat S0() const;
  CMat L0() const { return S0() + R0; }
  // G0 H(z) at z = r e^{i theta} (the single-valued part)
  CMat holomorphic_part(cd z) const;
  // Full fundamental matrix on the cover.
  CMat evaluate(double r, double theta) const;
  // Truncation tail estimate at radius r.
  double tail(double r) const;
  // Local monodromy along a counterclockwise loop: Y0(z e^{2 pi i}) = Y0(z) exp(2 pi i L0).
  CMat monodromy_exponent_matrix() const;  // exp(2 pi i L0)
};

// Eigenvalues sorted by (Re, Im); eigenvector columns scaled so the
// largest component is 1.
LeveltExponents levelt_exponents(const CMat& A1, double tol = 1e-9);

// Throws NotDiagonalizable, NotFuchsian (coefficients beyond A_1).
LeveltData levelt_series(const SystemCoefficients& sys, const std::vector<cd>& t, int L, double tol = 1e-9);
LeveltData levelt_series(const CMat& Lambda, const CMat& A1, int L, double tol = 1e-9);

struct GaugeFactors {
  CMat D0frak;               // commutes with J
  std::vector<CMat> Dl;      // Dl[l-1] = D_l, nonzero only on mu_i - mu_j = l
};

// Other Levelt form Y0 * D with D = D0 (I + D_1 + ... + D_kappa).
// Throws InvalidGaugePattern.
LeveltData gauge_apply(const LeveltData& lv, const GaugeFactors& g, double tol = 1e-9);
CMat gauge_matrix(const GaugeFactors& g);

}  // namespace iso
