#include "isostokes/levelt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iso {

LeveltExponents exponents_of(const std::vector<cd>& mu, double tol) {
  LeveltExponents ex;
  ex.mu = mu;
  for (const auto& m : mu) {
    double d = std::floor(m.real());
    if (m.real() - d > 1 - tol) d += 1;  // snap values just below an integer
    ex.D0.push_back(static_cast<int>(d));
    cd rho = m - d;
    if (std::abs(rho.real()) < tol) rho = cd(0, rho.imag());
    ex.S0.push_back(rho);
  }
  const int n = static_cast<int>(mu.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cd d = mu[std::size_t(i)] - mu[std::size_t(j)];
      double l = std::round(d.real());
      if (l < 1) continue;
      double off = std::abs(d - l);
      if (off < tol)
        ex.lattice.push_back({i, j, static_cast<int>(l)});
      else if (off < 1e-6)
        ex.ill_conditioned = true;
    }
  return ex;
}

LeveltExponents levelt_exponents(const CMat& A1, double tol) {
  auto dg = diagonalize(A1, tol);
  auto mu = dg.eigenvalues;
  std::sort(mu.begin(), mu.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return exponents_of(mu, tol);
}

namespace {

std::vector<int> sorted_order(const std::vector<cd>& mu) {
  std::vector<int> idx(mu.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    cd x = mu[std::size_t(a)], y = mu[std::size_t(b)];
    if (std::abs(x.real() - y.real()) > 1e-12) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return idx;
}

}  // namespace

LeveltData levelt_series(const CMat& Lambda, const CMat& A1, int L, double tol) {
  const int n = A1.rows();
  auto dg = diagonalize(A1, tol);
  auto order = sorted_order(dg.eigenvalues);
  LeveltData lv;
  lv.G0 = CMat(n, n);
  std::vector<cd> mu;
  for (int c = 0; c < n; ++c) {
    int src = order[std::size_t(c)];
    mu.push_back(dg.eigenvalues[std::size_t(src)]);
    for (int r = 0; r < n; ++r) lv.G0(r, c) = dg.G(r, src);
  }
  lv.diag_residual = dg.residual;
  lv.ex = exponents_of(mu, tol);
  CMat Gi = inverse(lv.G0);
  lv.Lambda_tilde = Gi * Lambda * lv.G0;
  lv.R0 = CMat(n, n);
  // R0 split by level l = d_i - d_j
  std::vector<CMat> Rl(std::size_t(L + 1), CMat(n, n));
  auto resonant = [&](int i, int j, int l) {
    for (const auto& r : lv.ex.lattice)
      if (r.i == i && r.j == j && r.l == l) return true;
    return false;
  };
  lv.Psi.push_back(CMat::identity(n));
  for (int l = 1; l <= L; ++l) {
    CMat rhs = lv.Lambda_tilde * lv.Psi[std::size_t(l - 1)];
    for (int k = 1; k < l; ++k) rhs -= lv.Psi[std::size_t(l - k)] * Rl[std::size_t(k)];
    CMat H(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (resonant(i, j, l)) {
          Rl[std::size_t(l)](i, j) = rhs(i, j);
          H(i, j) = 0;
        } else {
          H(i, j) = rhs(i, j) / (double(l) + mu[std::size_t(j)] - mu[std::size_t(i)]);
        }
      }
    lv.Psi.push_back(H);
  }
  for (int l = 1; l <= L; ++l) lv.R0 += Rl[std::size_t(l)];
  return lv;
}

LeveltData levelt_series(const SystemCoefficients& sys, const std::vector<cd>& t, int L, double tol) {
  for (int k = 2; k <= sys.levels(); ++k)
    if (sys.A_at(k, t).max_abs() != 0)
      throw input_error("NotFuchsian", "coefficients beyond A_1 make z = 0 irregular");
  return levelt_series(sys.Lambda(t), sys.A_at(1, t), L, tol);
}

CMat LeveltData::D0() const {
  std::vector<cd> d;
  for (int x : ex.D0) d.push_back(cd(x));
  return CMat::diag(d);
}

CMat LeveltData::S0() const { return CMat::diag(ex.S0); }

CMat LeveltData::holomorphic_part(cd z) const {
  const int n = this->n();
  CMat H(n, n);
  // Horner
  for (int l = static_cast<int>(Psi.size()) - 1; l >= 0; --l) H = H * z + Psi[std::size_t(l)];
  return G0 * H;
}

CMat LeveltData::evaluate(double r, double theta) const {
  cd z = std::polar(r, theta);
  cd logz(std::log(r), theta);
  const int n = this->n();
  std::vector<cd> zd;
  for (int i = 0; i < n; ++i) zd.push_back(std::exp(double(ex.D0[std::size_t(i)]) * logz));
  return holomorphic_part(z) * CMat::diag(zd) * expm(L0() * logz);
}

double LeveltData::tail(double r) const {
  if (Psi.empty()) return 0;
  return Psi.back().max_abs() * std::pow(r, double(Psi.size() - 1));
}

CMat LeveltData::monodromy_exponent_matrix() const { return expm(L0() * cd(0, 2 * kPi)); }

CMat gauge_matrix(const GaugeFactors& g) {
  const int n = g.D0frak.rows();
  CMat P = CMat::identity(n);
  for (const auto& D : g.Dl) P += D;
  return g.D0frak * P;
}

LeveltData gauge_apply(const LeveltData& lv, const GaugeFactors& g, double tol) {
  const int n = lv.n();
  if (g.D0frak.rows() != n || g.D0frak.cols() != n) throw input_error("DimensionMismatch", "gauge factor size");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(lv.ex.mu[std::size_t(i)] - lv.ex.mu[std::size_t(j)]) > tol && std::abs(g.D0frak(i, j)) > tol)
        throw input_error("InvalidGaugePattern", "D_0 must commute with J");
  for (std::size_t l = 1; l <= g.Dl.size(); ++l) {
    const CMat& D = g.Dl[l - 1];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (std::abs(D(i, j)) <= tol) continue;
        bool ok = false;
        for (const auto& r : lv.ex.lattice)
          if (r.i == i && r.j == j && r.l == static_cast<int>(l)) ok = true;
        if (!ok) throw input_error("InvalidGaugePattern", "D_l entry off the resonance lattice");
      }
  }
  LeveltData out = lv;
  CMat Dfull = gauge_matrix(g);
  CMat Di = inverse(Dfull);
  CMat D0i = inverse(g.D0frak);
  out.G0 = lv.G0 * g.D0frak;
  // I + sum Psi~ z^l = D0^{-1} (I + sum Psi z^l) D0 (I + sum D_l z^l)
  const std::size_t Lp = lv.Psi.size();
  std::vector<CMat> conj;
  for (const auto& P : lv.Psi) conj.push_back(D0i * P * g.D0frak);
  std::vector<CMat> poly(1, CMat::identity(n));
  for (const auto& D : g.Dl) poly.push_back(D);
  out.Psi.assign(Lp, CMat(n, n));
  for (std::size_t a = 0; a < Lp; ++a)
    for (std::size_t b = 0; b < poly.size() && a + b < Lp; ++b) out.Psi[a + b] += conj[a] * poly[b];
  out.R0 = Di * lv.R0 * Dfull + Di * (lv.S0() * Dfull - Dfull * lv.S0());
  out.Lambda_tilde = D0i * lv.Lambda_tilde * g.D0frak;
  return out;
}

}  // namespace iso
