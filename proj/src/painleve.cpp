#include "isostokes/painleve.hpp"

#include <cmath>

#include "isostokes/errors.hpp"
#include "isostokes/linalg.hpp"
#include "isostokes/special.hpp"

namespace iso {

CMat skew_from_omega(const std::array<cd, 3>& w) {
  CMat V(3, 3);
  V(0, 1) = w[1];
  V(0, 2) = -w[2];
  V(1, 0) = -w[1];
  V(1, 2) = w[0];
  V(2, 0) = w[2];
  V(2, 1) = -w[0];
  return V;
}

std::array<cd, 3> omega_from_skew(const CMat& V) { return {V(1, 2), V(0, 1), V(2, 0)}; }

CMat PainleveState::V() const { return skew_from_omega(Omega); }

PainleveState omegas_from_y(cd y, cd yp, cd t, cd mu, BranchChoice b) {
  const double eps = 1e-14;
  if (std::abs(t) < eps || std::abs(t - 1.0) < eps || std::abs(y) < eps || std::abs(y - 1.0) < eps ||
      std::abs(y - t) < eps)
    throw numeric_error("SingularConfiguration", "y in {0, 1, t} or t in {0, 1}");
  PainleveState st;
  st.t = t;
  st.y = y;
  st.yp = yp;
  st.mu = mu;
  st.branch = b;
  const cd I(0, 1);
  st.A = 0.5 * (yp * t * (t - 1.0) - y * (y - 1.0));
  // square roots arranged to stay continuous along the holomorphic A3 branch near t = 0
  cd p1 = std::sqrt((y - 1.0) * (y - t) / t);
  cd p2 = I * t * std::sqrt(-y * (y - t) / ((1.0 - t) * t * t));
  cd p3 = I * std::sqrt(-y * (y - 1.0) / (t * (1.0 - t)));
  double s1 = -1, s2 = 1, s3 = 1;
  if (b.flip12) {
    s1 = -s1;
    s2 = -s2;
  }
  if (b.flip23) {
    s2 = -s2;
    s3 = -s3;
  }
  st.Omega[0] = s1 * I * p1 * (st.A / ((y - 1.0) * (y - t)) + mu);
  st.Omega[1] = s2 * I * p2 * (st.A / (y * (y - t)) + mu);
  st.Omega[2] = -s3 * p3 * (st.A / (y * (y - 1.0)) + mu);
  return st;
}

namespace {

struct Dual {
  cd v, d;
  Dual(cd a = 0, cd b = 0) : v(a), d(b) {}
  friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
};

Dual pw(Dual x, int k) {
  Dual r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

}  // namespace

ParametricPoint a3_parametric(cd s) {
  Dual S(s, 1.0), one(1.0, 0.0);
  Dual c3(3.0), c9(9.0), c5(5.0);
  Dual num_y = pw(one - S, 2) * (one + c3 * S) * pw(c9 * S * S - c5, 2);
  Dual den_y = (one + S) * (Dual(243.0) * pw(S, 6) + Dual(1539.0) * pw(S, 4) - Dual(207.0) * S * S + Dual(25.0));
  Dual y = num_y / den_y;
  Dual t = pw(one - S, 3) * (one + c3 * S) / (pw(one + S, 3) * (one - c3 * S));
  return {y.v, t.v, y.d, t.d};
}

std::pair<cd, cd> a3_branch(cd t) {
  if (std::abs(t) > 0.2) throw input_error("OutOfRadius", "A3 branch evaluated beyond |t| = 0.2");
  if (t == cd(0)) return {0.0, 0.5};
  cd s = -1.0 / 3.0 + t / 12.0;
  for (int it = 0; it < 100; ++it) {
    auto p = a3_parametric(s);
    cd ds = (p.t - t) / p.dt_ds;
    s -= ds;
    if (std::abs(ds) < 1e-17) break;
  }
  auto p = a3_parametric(s);
  return {p.y, p.dy_ds / p.dt_ds};
}

namespace {

using PS = std::vector<Rational>;

PS ps_mul(const PS& a, const PS& b, int M) {
  PS c(std::size_t(M), Rational(0));
  for (int i = 0; i < M && i < int(a.size()); ++i) {
    if (a[std::size_t(i)] == 0) continue;
    for (int j = 0; i + j < M && j < int(b.size()); ++j) c[std::size_t(i + j)] += a[std::size_t(i)] * b[std::size_t(j)];
  }
  return c;
}

PS ps_inv(const PS& a, int M) {
  PS r(std::size_t(M), Rational(0));
  r[0] = Rational(1) / a[0];
  for (int k = 1; k < M; ++k) {
    Rational s = 0;
    for (int j = 1; j <= k && j < int(a.size()); ++j) s += a[std::size_t(j)] * r[std::size_t(k - j)];
    r[std::size_t(k)] = -s / a[0];
  }
  return r;
}

PS ps_const(Rational c, int M) {
  PS r(std::size_t(M), Rational(0));
  r[0] = c;
  return r;
}

PS ps_add(const PS& a, const PS& b) {
  PS c = a;
  for (std::size_t i = 0; i < c.size() && i < b.size(); ++i) c[i] += b[i];
  return c;
}

PS ps_scale(const PS& a, Rational k) {
  PS c = a;
  for (auto& x : c) x *= k;
  return c;
}

PS ps_pow(const PS& a, int k, int M) {
  PS r = ps_const(1, M);
  for (int i = 0; i < k; ++i) r = ps_mul(r, a, M);
  return r;
}

}  // namespace

std::vector<Rational> a3_taylor_exact(int N) {
  const int M = N + 1;
  // s = -1/3 + sigma, t = sigma g(sigma), g = 3 (4/3 - sigma)^3 / ((2/3 + sigma)^3 (2 - 3 sigma))
  auto g_of = [&](const PS& sig) {
    PS a = ps_add(ps_const(Rational(4, 3), M), ps_scale(sig, -1));
    PS b = ps_add(ps_const(Rational(2, 3), M), sig);
    PS c = ps_add(ps_const(Rational(2), M), ps_scale(sig, -3));
    PS num = ps_scale(ps_pow(a, 3, M), 3);
    PS den = ps_mul(ps_pow(b, 3, M), c, M);
    return ps_mul(num, ps_inv(den, M), M);
  };
  PS sig(std::size_t(M), Rational(0));
  if (M > 1) sig[1] = Rational(1, 12);
  for (int it = 0; it < M + 1; ++it) {
    PS ig = ps_inv(g_of(sig), M);
    PS next(std::size_t(M), Rational(0));
    for (int k = 1; k < M; ++k) next[std::size_t(k)] = ig[std::size_t(k - 1)];
    sig = next;
  }
  PS s = ps_add(ps_const(Rational(-1, 3), M), sig);
  PS one = ps_const(1, M);
  PS oms = ps_add(one, ps_scale(s, -1));
  PS s2 = ps_mul(s, s, M);
  PS f95 = ps_add(ps_scale(s2, 9), ps_const(-5, M));
  PS num = ps_mul(ps_mul(ps_pow(oms, 2, M), ps_scale(sig, 3), M), ps_pow(f95, 2, M), M);
  PS s4 = ps_mul(s2, s2, M), s6 = ps_mul(s4, s2, M);
  PS poly = ps_add(ps_add(ps_scale(s6, 243), ps_scale(s4, 1539)), ps_add(ps_scale(s2, -207), ps_const(25, M)));
  PS den = ps_mul(ps_add(one, s), poly, M);
  PS y = ps_mul(num, ps_inv(den, M), M);
  return std::vector<Rational>(y.begin() + 1, y.end());
}

OmegaSeries a3_omega_series(int N) {
  OmegaSeries o;
  o.alpha.assign(std::size_t(N + 1), Rational(0));
  o.beta.assign(std::size_t(N + 1), Rational(0));
  o.gamma.assign(std::size_t(N + 1), Rational(0));
  o.alpha[0] = Rational(1, 8);
  o.gamma[0] = Rational(1, 8);
  auto conv = [](const std::vector<Rational>& a, const std::vector<Rational>& b, int k) {
    Rational s = 0;
    for (int m = 0; m <= k; ++m) s += a[std::size_t(m)] * b[std::size_t(k - m)];
    return s;
  };
  for (int k = 1; k <= N; ++k) {
    // (1 - t) Omega2' = Omega1 Omega3 = -2 alpha gamma
    Rational acc = 0;
    for (int m = 0; m <= k - 1; ++m) acc += -2 * conv(o.alpha, o.gamma, m);
    o.beta[std::size_t(k)] = acc / k;
    // t Omega1' = Omega2 Omega3
    o.alpha[std::size_t(k)] = conv(o.beta, o.gamma, k) / k;
    // t (t - 1) Omega3' = Omega1 Omega2
    o.gamma[std::size_t(k)] = (Rational(k - 1) * o.gamma[std::size_t(k - 1)] - conv(o.alpha, o.beta, k)) / k;
  }
  return o;
}

std::vector<CMat> a3_v_taylor(int N, BranchChoice b) {
  auto o = a3_omega_series(N);
  const cd is2(0, std::sqrt(2.0));
  double s1 = 1, s2 = 1, s3 = 1;
  if (b.flip12) {
    s1 = -s1;
    s2 = -s2;
  }
  if (b.flip23) {
    s2 = -s2;
    s3 = -s3;
  }
  std::vector<CMat> out;
  for (int k = 0; k <= N; ++k) {
    std::array<cd, 3> w{s1 * is2 * static_cast<double>(o.alpha[std::size_t(k)]),
                        s2 * static_cast<double>(o.beta[std::size_t(k)]),
                        s3 * is2 * static_cast<double>(o.gamma[std::size_t(k)])};
    out.push_back(skew_from_omega(w));
  }
  return out;
}

cd pvi_rhs(cd t, cd y, cd yp, cd mu) {
  cd a = 0.5 * (1.0 / y + 1.0 / (y - 1.0) + 1.0 / (y - t)) * yp * yp;
  cd b = (1.0 / t + 1.0 / (t - 1.0) + 1.0 / (y - t)) * yp;
  cd k = 2.0 * mu - 1.0;
  cd c = 0.5 * y * (y - 1.0) * (y - t) / (t * t * (t - 1.0) * (t - 1.0)) *
         (k * k + t * (t - 1.0) / ((y - t) * (y - t)));
  return a - b + c;
}

double pvi_residual(const std::function<cd(cd)>& y, const std::vector<cd>& grid, cd mu, double h) {
  double worst = 0;
  for (cd t : grid) {
    cd y0 = y(t);
    if (std::abs(t) < 1e-12 || std::abs(t - 1.0) < 1e-12 || std::abs(y0) < 1e-12 || std::abs(y0 - 1.0) < 1e-12 ||
        std::abs(y0 - t) < 1e-12)
      throw input_error("GridSingular", "grid point hits a singular configuration");
    cd yp2 = y(t + 2.0 * h), yp1 = y(t + h), ym1 = y(t - h), ym2 = y(t - 2.0 * h);
    cd d1 = (-yp2 + 8.0 * yp1 - 8.0 * ym1 + ym2) / (12.0 * h);
    cd d2 = (-yp2 + 16.0 * yp1 - 30.0 * y0 + 16.0 * ym1 - ym2) / (12.0 * h * h);
    worst = std::max(worst, std::abs(d2 - pvi_rhs(t, y0, d1, mu)));
  }
  return worst;
}

std::vector<OmegaFlowSample> omega_flow(const std::array<cd, 3>& init, const std::vector<cd>& path,
                                        int samples_per_leg, const OdeOptions& opt) {
  if (path.size() < 2) throw input_error("ConfigInvalid", "omega flow needs two path points");
  std::vector<OmegaFlowSample> out;
  std::vector<cd> w(init.begin(), init.end());
  auto record = [&](cd t) {
    out.push_back({t, {w[0], w[1], w[2]}, w[0] * w[0] + w[1] * w[1] + w[2] * w[2]});
  };
  record(path.front());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    cd a = path[i], b = path[i + 1];
    for (int q = 0; q < samples_per_leg; ++q) {
      double s0 = double(q) / samples_per_leg, s1 = double(q + 1) / samples_per_leg;
      OdeRhs f = [&](double s, const std::vector<cd>& x, std::vector<cd>& d) {
        cd t = a + s * (b - a);
        if (std::abs(t) < 1e-14 || std::abs(t - 1.0) < 1e-14)
          throw numeric_error("BlowUp", "omega flow path touches t = 0 or t = 1");
        cd dt = b - a;
        d[0] = dt * x[1] * x[2] / t;
        d[1] = dt * x[0] * x[2] / (1.0 - t);
        d[2] = dt * x[0] * x[1] / (t * (t - 1.0));
      };
      try {
        w = dop853(f, s0, s1, w, opt);
      } catch (const Error& e) {
        if (e.code() == "StepFailure") throw numeric_error("BlowUp", "omega flow step failure near " + std::to_string(std::abs(a + s0 * (b - a))));
        throw;
      }
      for (const auto& x : w)
        if (!std::isfinite(std::abs(x)) || std::abs(x) > 1e10) throw numeric_error("BlowUp", "omega flow diverges");
      record(a + s1 * (b - a));
    }
  }
  return out;
}

CMat a3_psi() {
  const cd I(0, 1);
  const double r = 1 / std::sqrt(2.0);
  CMat P(3, 3);
  P(0, 0) = I / 2.0;
  P(0, 1) = r;
  P(0, 2) = -I / 2.0;
  P(1, 0) = -I / 2.0;
  P(1, 1) = r;
  P(1, 2) = I / 2.0;
  P(2, 0) = r;
  P(2, 1) = 0;
  P(2, 2) = r;
  return P;
}

FrozenStokes a3_frozen_stokes_hankel() {
  FrozenStokes fs;
  const cd I(0, 1);
  const cd a = I * std::sqrt(2.0) / 8.0;
  CMat V0 = skew_from_omega({a, 0.0, a});
  CMat Psi = a3_psi();
  CMat D = inverse(Psi) * V0 * Psi;
  fs.psi_residual = (D - CMat::diag({-0.25, 0.0, 0.25})).max_abs();

  const double sp2 = std::sqrt(kPi / 2);
  const cd c1m = -(I / 2.0) * sp2 * std::exp(I * (7 * kPi / 8));
  const cd c1p = -c1m;
  const cd c2 = std::sqrt(kPi) / 2.0 * std::exp(-I * (3 * kPi / 8));
  const cd c1h = std::sqrt(kPi) / 2.0 * std::exp(I * (3 * kPi / 8));
  const double nu = 0.75;
  // y_1(z) = c sqrt(z/2) e^{z/2} H(i z e^{i m pi} / 2) with z = r on arg 0
  auto y1 = [&](cd c, int kind, double m, double z, int terms) {
    double r = z / 2, th = kPi / 2 + m * kPi;
    cd H = terms > 0 ? hankel_asymptotic(kind, nu, r, th, terms - 1) : hankel(kind, nu, r, th);
    return c * std::sqrt(z / 2) * std::exp(z / 2) * H;
  };
  // leading terms reproduce the normalizations exactly; full values agree with the expansion
  const double zl = 1e6;
  double norm = 0;
  norm = std::max(norm, std::abs(y1(c1m, 1, 0, zl, 1) - (-I / 2.0)));
  norm = std::max(norm, std::abs(y1(c1p, 1, 0, zl, 1) - (I / 2.0)));
  norm = std::max(norm, std::abs(y1(c2, 2, 0, 60, 1) / std::exp(60.0) - 1 / std::sqrt(2.0)));
  norm = std::max(norm, std::abs(y1(c1h, 1, -1, 60, 1) / std::exp(60.0) - 1 / std::sqrt(2.0)));
  for (double z : {60.0, 80.0}) {
    norm = std::max(norm, std::abs(y1(c1m, 1, 0, z, 0) / y1(c1m, 1, 0, z, 60) - 1.0));
    norm = std::max(norm, std::abs(y1(c2, 2, 0, z, 0) / y1(c2, 2, 0, z, 60) - 1.0));
  }
  fs.normalization_residual = norm;

  // H1(e^{-i pi} x) = 2 cos(nu pi) H1(x) + e^{-i nu pi} H2(x) on the cover
  double cyc = 0, cyc_disp = 0;
  for (int q = 0; q < 20; ++q) {
    double r = 0.5 + 0.75 * q;  // |iz/2| from 0.5 to 14.75
    cd lhs = hankel(1, nu, r, kPi / 2 - kPi);
    cd h1 = hankel(1, nu, r, kPi / 2), h2 = hankel(2, nu, r, kPi / 2);
    double sc = std::max(1.0, std::abs(lhs));
    cyc = std::max(cyc, std::abs(lhs - (2 * std::cos(nu * kPi) * h1 + std::exp(-I * (nu * kPi)) * h2)) / sc);
    cyc_disp = std::max(cyc_disp, std::abs(lhs - (std::sqrt(2.0) * h1 + std::exp(-I * (3 * kPi / 4)) * h2)) / sc);
  }
  fs.cyclic_residual = cyc;
  fs.displayed_cyclic_residual = cyc_disp;

  // Third column of the first row on S_2 minus the c2 part is a multiple of the
  // H1 solution; (S1)_13 (y1(c1-) - y1(c1+)) equals that remainder. The ratio is
  // taken at several z on the series branch (explicit phases on the cover).
  cd s13 = 0;
  double spread = 0;
  for (double z : {1.0, 3.0, 6.0}) {
    cd rem = y1(c1h, 1, -1, z, 0) - y1(c2, 2, 0, z, 0);
    cd den = y1(c1m, 1, 0, z, 0) - y1(c1p, 1, 0, z, 0);
    cd v = rem / den;
    if (z == 1.0)
      s13 = v;
    else
      spread = std::max(spread, std::abs(v - s13));
  }
  fs.ratio_spread = spread;
  cd s23 = -s13;  // second row: y_2 constant
  fs.S1 = CMat::identity(3);
  fs.S1(0, 2) = s13;
  fs.S1(1, 2) = s23;
  fs.S2 = inverse(fs.S1).transpose();
  CMat J = CMat::diag({1.0, -1.0, 1.0});
  fs.S1_bar = J * fs.S1 * J;
  return fs;
}

}  // namespace iso
