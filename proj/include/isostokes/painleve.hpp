#pragma once
// The n = 3 skew-symmetric reduction, Painleve VI with parameter mu, and
// the algebraic A3 solution.
#include <array>
#include <functional>
#include <vector>

#include "isostokes/matrix.hpp"
#include "isostokes/ode.hpp"

namespace iso {

// Sign bits of the square roots: bit 0 flips (Omega1, Omega2), bit 1 flips (Omega2, Omega3).
struct BranchChoice {
  bool flip12 = false;
  bool flip23 = false;
};

struct PainleveState {
  cd t{0, 0}, y{0, 0}, yp{0, 0};
  cd mu{-0.25, 0};
  cd A{0, 0};
  std::array<cd, 3> Omega{};
  BranchChoice branch;
  CMat V() const;
};

// V = [[0, W2, -W3], [-W2, 0, W1], [W3, -W1, 0]]
CMat skew_from_omega(const std::array<cd, 3>& w);
std::array<cd, 3> omega_from_skew(const CMat& V);

// Throws SingularConfiguration for y in {0, 1, t} or t in {0, 1}.
PainleveState omegas_from_y(cd y, cd yp, cd t, cd mu = -0.25, BranchChoice b = {});

// Algebraic A3 solution.
struct ParametricPoint {
  cd y, t;
  cd dy_ds, dt_ds;
};
ParametricPoint a3_parametric(cd s);
// Holomorphic branch through s = -1/3; Newton on the parametric form.
// Throws OutOfRadius for |t| > 0.2.
std::pair<cd, cd> a3_branch(cd t);
// Exact Taylor coefficients y_1..y_N of the holomorphic branch (y_0 = 0).
std::vector<Rational> a3_taylor_exact(int N);
// Omega series: Omega1 = i sqrt2 sum alpha_k t^k, Omega2 = sum beta_k t^k,
// Omega3 = i sqrt2 sum gamma_k t^k, from the Omega equations with the
// limits Omega1(0) = Omega3(0) = i sqrt2 / 8, Omega2(0) = 0.
struct OmegaSeries {
  std::vector<Rational> alpha, beta, gamma;
};
OmegaSeries a3_omega_series(int N);
// Coefficient matrices V_k of V(t) = sum V_k t^k for the given branch.
std::vector<CMat> a3_v_taylor(int N, BranchChoice b = {});

// PVI_mu right-hand side y'' = P(t, y, y').
cd pvi_rhs(cd t, cd y, cd yp, cd mu);
// Five-point finite-difference residual of PVI_mu on the grid.
// Throws GridSingular.
double pvi_residual(const std::function<cd(cd)>& y, const std::vector<cd>& grid, cd mu, double h = 2e-3);

// dOmega1/dt = W2 W3 / t, dOmega2/dt = W1 W3 / (1 - t), dOmega3/dt = W1 W2 / (t (t - 1)).
struct OmegaFlowSample {
  cd t;
  std::array<cd, 3> Omega;
  cd invariant;  // Omega1^2 + Omega2^2 + Omega3^2
};
// Straight segments between the path points. Throws BlowUp.
std::vector<OmegaFlowSample> omega_flow(const std::array<cd, 3>& init, const std::vector<cd>& path,
                                        int samples_per_leg = 1, const OdeOptions& opt = {});

// The Stokes matrices of the frozen A3 system.
struct FrozenStokes {
  CMat S1, S2;
  CMat S1_bar;  // J S1 J, J = diag(1, -1, 1)
  double psi_residual = 0;        // |Psi^{-1} V(0) Psi - diag(-1/4, 0, 1/4)|
  double normalization_residual = 0;  // constants c1, c2, c1hat vs their limits
  double cyclic_residual = 0;            // with 2 cos(3 pi / 4) = -sqrt 2
  double displayed_cyclic_residual = 0;  // same relation with +sqrt 2
  double ratio_spread = 0;              // z-dependence of the (1,3) ratio
};
// Closed-form route through Hankel functions of order 3/4.
FrozenStokes a3_frozen_stokes_hankel();
CMat a3_psi();

}  // namespace iso
