#include "isostokes/connect.hpp"

#include <map>
#include <algorithm>
#include <cmath>

namespace iso {

namespace {

double vnorm(const std::vector<cd>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// Column j of the truncated formal series (without z^{B1} e^{Lambda z}).
std::vector<cd> series_column(const FormalSolution& fs, int j, cd z, int K, int K_cap, int& used, double& err) {
  const int n = static_cast<int>(fs.u.size());
  const int kmax = std::min(fs.K, K >= 0 ? K : K_cap);
  std::vector<cd> col(static_cast<std::size_t>(n), 0.0), term(static_cast<std::size_t>(n));
  col[std::size_t(j)] = 1.0;
  cd zi = 1.0 / z, w = 1.0;
  double prev = 1.0;
  used = 0;
  err = 0;
  for (int k = 1; k <= fs.K; ++k) {
    w *= zi;
    for (int a = 0; a < n; ++a) term[std::size_t(a)] = fs.F[std::size_t(k)](a, j) * w;
    double tn = vnorm(term);
    if (k > kmax || (K < 0 && tn > 0 && tn >= prev)) {
      err = tn;
      return col;
    }
    for (int a = 0; a < n; ++a) col[std::size_t(a)] += term[std::size_t(a)];
    used = k;
    if (tn > 0) prev = tn;
  }
  err = 0;  // every stored term used; error unknown beyond K
  return col;
}

}  // namespace

FormalValue evaluate_formal_scaled(const FormalSolution& fs, CoverPoint z, int K, int K_cap) {
  const int n = static_cast<int>(fs.u.size());
  FormalValue fv;
  fv.Y = CMat(n, n);
  cd zz = z.value(), lz = z.log();
  for (int j = 0; j < n; ++j) {
    int used = 0;
    double err = 0;
    auto col = series_column(fs, j, zz, K, K_cap, used, err);
    cd pw = std::exp(fs.B1(j, j) * lz);
    for (int a = 0; a < n; ++a) fv.Y(a, j) = col[std::size_t(a)] * pw;
    fv.K_used.push_back(used);
    fv.error.push_back(err);
  }
  return fv;
}

FormalValue evaluate_formal(const FormalSolution& fs, CoverPoint z, int K, int K_cap, double r_min) {
  if (z.r < r_min) throw input_error("RadiusTooSmall", "formal series evaluated inside the matching radius");
  auto fv = evaluate_formal_scaled(fs, z, K, K_cap);
  const int n = fv.Y.rows();
  cd zz = z.value();
  for (int j = 0; j < n; ++j) {
    cd e = std::exp(fs.u[std::size_t(j)] * zz);
    for (int a = 0; a < n; ++a) fv.Y(a, j) *= e;
  }
  return fv;
}

namespace {

struct Coeffs {
  CMat Lambda;
  std::vector<CMat> A;  // A[k-1]
};

Coeffs coeffs_at(const SystemCoefficients& sys, const std::vector<cd>& t) {
  Coeffs c;
  c.Lambda = sys.Lambda(t);
  for (int k = 1; k <= sys.levels(); ++k) c.A.push_back(sys.A_at(k, t));
  return c;
}

// A(z) - shift I
CMat system_matrix(const Coeffs& c, cd z, cd shift) {
  const int n = c.Lambda.rows();
  CMat M = c.Lambda;
  for (int a = 0; a < n; ++a) M(a, a) -= shift;
  cd zi = 1.0 / z, w = 1.0;
  for (const auto& A : c.A) {
    w *= zi;
    M += A * w;
  }
  return M;
}

// Integrates the columns of Y along the log-linear path, for the system shifted by `shift`.
CMat integrate_leg(const Coeffs& c, CoverPoint from, CoverPoint to, const CMat& Y, cd shift, const NumericsParams& p,
                   OdeStats* stats) {
  const int n = Y.rows(), m = Y.cols();
  if (from.r < p.r_min * 0.999 || to.r < p.r_min * 0.999)
    throw input_error("PathThroughOrigin", "path enters the excluded disc around z = 0");
  cd l0 = from.log(), l1 = to.log(), dl = l1 - l0;
  OdeRhs f = [&](double s, const std::vector<cd>& y, std::vector<cd>& dy) {
    cd z = std::exp(l0 + s * dl);
    CMat M = system_matrix(c, z, shift);
    cd fac = z * dl;
    for (int col = 0; col < m; ++col)
      for (int a = 0; a < n; ++a) {
        cd acc = 0;
        for (int b = 0; b < n; ++b) acc += M(a, b) * y[std::size_t(b * m + col)];
        dy[std::size_t(a * m + col)] = fac * acc;
      }
  };
  std::vector<cd> y(std::size_t(n * m));
  for (int a = 0; a < n; ++a)
    for (int col = 0; col < m; ++col) y[std::size_t(a * m + col)] = Y(a, col);
  auto out = dop853(f, 0.0, 1.0, y, p.ode, stats);
  CMat R(n, m);
  for (int a = 0; a < n; ++a)
    for (int col = 0; col < m; ++col) R(a, col) = out[std::size_t(a * m + col)];
  return R;
}

cd trace_integral(const Coeffs& c, CoverPoint from, CoverPoint to) {
  cd z0 = from.value(), z1 = to.value();
  cd tr0 = 0;
  for (int a = 0; a < c.Lambda.rows(); ++a) tr0 += c.Lambda(a, a);
  cd s = tr0 * (z1 - z0);
  for (std::size_t k = 1; k <= c.A.size(); ++k) {
    cd tr = 0;
    for (int a = 0; a < c.Lambda.rows(); ++a) tr += c.A[k - 1](a, a);
    if (k == 1)
      s += tr * (to.log() - from.log());
    else
      s += tr * (std::pow(z1, 1.0 - double(k)) - std::pow(z0, 1.0 - double(k))) / (1.0 - double(k));
  }
  return s;
}

}  // namespace

PropagateReport propagate(const SystemCoefficients& sys, const std::vector<cd>& t, CoverPoint from, CoverPoint to,
                          const CMat& Y_from, const NumericsParams& p) {
  return propagate_path(sys, t, {from, to}, Y_from, p);
}

PropagateReport propagate_path(const SystemCoefficients& sys, const std::vector<cd>& t,
                               const std::vector<CoverPoint>& path, const CMat& Y_from, const NumericsParams& p) {
  if (path.size() < 2) throw input_error("ConfigInvalid", "path needs two points");
  Coeffs c = coeffs_at(sys, t);
  PropagateReport rep;
  rep.Y = Y_from;
  cd integral = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    OdeStats st;
    rep.Y = integrate_leg(c, path[i], path[i + 1], rep.Y, 0.0, p, &st);
    rep.stats.accepted += st.accepted;
    rep.stats.rejected += st.rejected;
    rep.stats.evaluations += st.evaluations;
    integral += trace_integral(c, path[i], path[i + 1]);
  }
  cd d0 = det(Y_from), d1 = det(rep.Y);
  rep.wronskian_residual = std::abs(d1 / (d0 * std::exp(integral)) - 1.0);
  return rep;
}

namespace {

double min_gap(const std::vector<cd>& u) {
  double scale = 1.0;
  for (auto x : u) scale = std::max(scale, std::abs(x));
  double g = INFINITY;
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      double d = std::abs(u[a] - u[b]);
      if (d > 1e-12 * scale) g = std::min(g, d);
    }
  return g;
}

bool coalesced(const std::vector<cd>& u) {
  double scale = 1.0;
  for (auto x : u) scale = std::max(scale, std::abs(x));
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b)
      if (std::abs(u[a] - u[b]) <= 1e-12 * scale) return true;
  return false;
}

// Worst growth exponent of the other columns relative to column j in direction theta.
double contamination(const std::vector<cd>& u, int j, double theta, double tol) {
  double worst = -INFINITY;
  cd e = std::polar(1.0, theta);
  for (std::size_t m = 0; m < u.size(); ++m) {
    if (int(m) == j) continue;
    cd d = u[std::size_t(j)] - u[m];
    if (std::abs(d) <= tol) continue;
    worst = std::max(worst, (d * e).real());
  }
  return worst;
}

// Direction inside [lo, hi] where column j is most recessive against the others.
double column_direction(const std::vector<cd>& u, const Sector& S, double lo, double hi, int j, double scale) {
  double best = S.bisector(), bestv = INFINITY;
  const int N = 720;
  for (int g = 0; g <= N; ++g) {
    double th = lo + (hi - lo) * g / N;
    double v = contamination(u, j, th, 1e-12 * scale);
    if (!std::isfinite(v)) v = 0;
    v += 1e-9 * std::abs(th - S.bisector());
    if (v < bestv) {
      bestv = v;
      best = th;
    }
  }
  return best;
}

// Row and column scales bringing every row and column to unit max-norm.
std::pair<std::vector<double>, std::vector<double>> equilibrate(const CMat& A) {
  const int n = A.rows(), m = A.cols();
  std::vector<double> r(std::size_t(n), 1.0), c(std::size_t(m), 1.0);
  for (int it = 0; it < 3; ++it) {
    for (int a = 0; a < n; ++a) {
      double w = 0;
      for (int b = 0; b < m; ++b) w = std::max(w, std::abs(A(a, b)) * r[std::size_t(a)] * c[std::size_t(b)]);
      if (w > 0) r[std::size_t(a)] /= w;
    }
    for (int b = 0; b < m; ++b) {
      double w = 0;
      for (int a = 0; a < n; ++a) w = std::max(w, std::abs(A(a, b)) * r[std::size_t(a)] * c[std::size_t(b)]);
      if (w > 0) c[std::size_t(b)] /= w;
    }
  }
  return {r, c};
}

CMat scaled(const CMat& A, const std::vector<double>& r, const std::vector<double>& c) {
  CMat B = A;
  for (int a = 0; a < A.rows(); ++a)
    for (int b = 0; b < A.cols(); ++b) B(a, b) *= r[std::size_t(a)] * c[std::size_t(b)];
  return B;
}

// Condition number up to diagonal scaling on both sides, which the Stokes
// matrices do not see.
double scaled_cond(const CMat& A) {
  auto [r, c] = equilibrate(A);
  return cond2(scaled(A, r, c));
}

// x with x A = e, computed on the equilibrated matrix.
CMat left_solve(const CMat& A, const CMat& e_row) {
  auto [r, c] = equilibrate(A);
  // x R^{-1} (R A C) = e C
  CMat rhs = e_row;
  for (int b = 0; b < A.cols(); ++b) rhs(0, b) *= c[std::size_t(b)];
  CMat y = solve(scaled(A, r, c).transpose(), rhs.transpose());
  CMat x(1, A.rows());
  for (int a = 0; a < A.rows(); ++a) x(0, a) = y(a, 0) * r[std::size_t(a)];
  return x;
}

// Direction where y_j is recessive against y_m, with the least dominance
// of y_j over the remaining columns. Searches [lo, hi] first and the whole
// open sector when the pair's recessive side lies in the margins.
double pair_direction(const std::vector<cd>& u, const Sector& S, double lo, double hi, int j, int m, double scale) {
  cd d = u[std::size_t(j)] - u[std::size_t(m)];
  if (std::abs(d) <= 1e-12 * scale) return column_direction(u, S, lo, hi, j, scale);
  auto search = [&](double a, double b, double need) {
    double best = NAN, bestv = INFINITY;
    const int N = 720;
    for (int g = 0; g <= N; ++g) {
      double th = a + (b - a) * g / N;
      double rm = (d * std::polar(1.0, th)).real() / std::abs(d);
      if (rm > -need) continue;
      double v = contamination(u, j, th, 1e-12 * scale);
      if (!std::isfinite(v)) v = 0;
      v = std::max(v, (rm + 0.5) * std::abs(d));
      v += 1e-9 * std::abs(th - S.bisector());
      if (v < bestv) {
        bestv = v;
        best = th;
      }
    }
    return best;
  };
  double th = search(lo, hi, 0.1);
  if (std::isnan(th) && std::isfinite(S.right) && std::isfinite(S.left)) {
    const double edge = 0.25 * std::min(0.3, 0.5 * (S.left - S.right));
    th = search(S.right + edge, S.left - edge, 0.05);
  }
  if (std::isnan(th)) throw numeric_error("NoRecessiveDirection", "no direction in the sector separates the pair");
  return th;
}

}  // namespace

ConnectionResult connection_matrices(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde,
                                     const NumericsParams& p, int count) {
  ConnectionResult res;
  res.u = sys.u(t);
  const auto& u = res.u;
  const int n = sys.n;
  if (on_crossing_locus(u, tau_tilde)) throw input_error("OnCrossingLocus", "a Stokes ray points along tau_tilde");
  res.frozen = coalesced(u);
  const int K = p.K >= 0 ? p.K : p.K_cap;
  res.formal = res.frozen ? frozen_formal(sys, t, K) : formal_coefficients(sys, t, K);
  res.B1 = res.formal.B1;
  res.levelt = levelt_series(sys, t, p.levelt_L);
  double gap = min_gap(u);
  res.R = p.R > 0 ? p.R : std::clamp(std::isfinite(gap) ? p.R_scale / gap : p.R_min_auto, p.R_min_auto, p.R_max_auto);
  Coeffs c = coeffs_at(sys, t);
  double scale = 1.0;
  for (auto x : u) scale = std::max(scale, std::abs(x));

  for (int r = 0; r < count; ++r) {
    Sector S = sector_from_rays(u, tau_tilde, r);
    res.sectors.push_back(S);
    double lo, hi;
    if (std::isfinite(S.right) && std::isfinite(S.left)) {
      lo = S.right + p.margin;
      hi = S.left - p.margin;
    } else {
      lo = hi = S.bisector();
    }
    // Column j of Y_r carries the coefficient of y_m correctly in directions
    // where y_j is recessive against y_m; other coefficients may pick up
    // Stokes jumps there. Row m of C_r^{-1} is fixed from those directions.
    std::map<std::pair<int, long>, CMat> cache;
    const double step = (hi - lo) / 720;
    auto column_at = [&](int j, double th) -> const CMat& {
      long key = step > 0 ? std::lround((th - lo) / step) : 0;
      auto it = cache.find({j, key});
      if (it != cache.end()) return it->second;
      // where y_j dominates some y_m', rounding grows like exp(g r) on the way in
      double g = contamination(u, j, th, 1e-12 * scale);
      double Rj = res.R;
      if (std::isfinite(g) && g > 0) {
        // balance the truncation error against rounding growth
        double best = INFINITY;
        for (double x = res.R; x >= 2 * p.r0; x /= 1.15) {
          auto f = evaluate_formal_scaled(res.formal, CoverPoint{x, th}, p.K, p.K_cap);
          // local errors of size rtol grow along the dominated columns; they cost
          // accuracy once they swamp the column in the final solve
          double est = f.error[std::size_t(j)] + 1e-16 * std::max(1.0, p.ode.rtol * std::exp(std::min(g * x, 700.0)));
          if (est < best) {
            best = est;
            Rj = x;
          }
        }
      }
      CoverPoint zR{Rj, th}, z0{p.r0, th};
      auto fv = evaluate_formal_scaled(res.formal, zR, p.K, p.K_cap);
      CMat w(n, 1);
      for (int a = 0; a < n; ++a) w(a, 0) = fv.Y(a, j);
      cd shift = u[std::size_t(j)];
      w = integrate_leg(c, zR, z0, w, shift, p, nullptr);
      cd e = std::exp(shift * z0.value());
      for (int a = 0; a < n; ++a) w(a, 0) *= e;
      CMat col = solve(res.levelt.evaluate(z0.r, z0.theta), w);
      return cache.emplace(std::make_pair(j, key), col).first->second;
    };
    std::vector<double> dirs, errs;
    auto pdir = std::vector<std::vector<double>>(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
    for (int j = 0; j < n; ++j) {
      double best = column_direction(u, S, lo, hi, j, scale);
      dirs.push_back(best);
      auto fv = evaluate_formal_scaled(res.formal, CoverPoint{res.R, best}, p.K, p.K_cap);
      double err = 0;
      for (int m = 0; m < n; ++m) {
        double th = m == j ? best : pair_direction(u, S, lo, hi, j, m, scale);
        pdir[std::size_t(j)][std::size_t(m)] = th;
        double g = contamination(u, j, th, 1e-12 * scale);
        if (!std::isfinite(g)) g = 0;
        // noise in the coefficients that are discarded, relevant through conditioning only
        err = std::max(err, fv.error[std::size_t(j)] * std::exp(std::min(std::max(g, 0.0) * res.R, 30.0)) * 1e-12);
      }
      errs.push_back(fv.error[std::size_t(j)] + err + 1e-16);
    }
    CMat D(n, n);
    for (int m = 0; m < n; ++m) {
      CMat M(n, n);
      for (int j = 0; j < n; ++j) {
        const CMat& v = column_at(j, pdir[std::size_t(j)][std::size_t(m)]);
        for (int a = 0; a < n; ++a) M(a, j) = v(a, 0);
      }
      CMat e(1, n);
      e(0, m) = 1.0;
      CMat d = left_solve(M, e);
      for (int a = 0; a < n; ++a) D(m, a) = d(0, a);
    }
    auto [rD, cD] = equilibrate(D);
    CMat Cr = scaled(inverse(scaled(D, rD, cD)), cD, rD);
    res.C.push_back(Cr);
    res.directions.push_back(dirs);
    res.column_error.push_back(errs);
  }
  for (const auto& C : res.C)
    if (scaled_cond(C) > 1e8) throw numeric_error("MatchingIllConditioned", "connection matrix condition number above 1e8");
  return res;
}

MonodromyData stokes_matrices(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde,
                              const NumericsParams& p) {
  auto cr = connection_matrices(sys, t, tau_tilde, p, 4);
  MonodromyData d;
  d.C = cr.C;
  d.C0 = cr.C.front();
  d.B1 = cr.B1;
  d.levelt = cr.levelt;
  d.u = cr.u;
  d.tau_tilde = tau_tilde;
  d.sectors = cr.sectors;
  d.R = cr.R;
  const int n = sys.n;
  double scale = 1.0;
  for (auto x : d.u) scale = std::max(scale, std::abs(x));
  for (std::size_t r = 0; r + 1 < cr.C.size(); ++r) {
    auto [rs, cs] = equilibrate(cr.C[r]);
    CMat rhs = cr.C[r + 1];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) rhs(a, b) *= rs[std::size_t(a)];
    CMat S = solve(scaled(cr.C[r], rs, cs), rhs);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) S(a, b) *= cs[std::size_t(a)];
    d.S.push_back(S);
    Sector O = cr.sectors[r].intersect(cr.sectors[r + 1]);
    double th = O.bisector();
    for (int a = 0; a < n; ++a) {
      d.quality.unit_diagonal = std::max(d.quality.unit_diagonal, std::abs(S(a, a) - 1.0));
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        double re = ((d.u[std::size_t(a)] - d.u[std::size_t(b)]) * std::polar(1.0, th)).real();
        bool allowed = re < -1e-12 * scale;
        if (!allowed) d.quality.off_pattern = std::max(d.quality.off_pattern, std::abs(S(a, b)));
      }
    }
    d.quality.det_residual = std::max(d.quality.det_residual, std::abs(det(S) - 1.0));
  }
  for (const auto& v : cr.column_error)
    for (double e : v) d.quality.max_column_error = std::max(d.quality.max_column_error, e);
  for (const auto& C : cr.C) d.quality.connection_condition = std::max(d.quality.connection_condition, scaled_cond(C));
  return d;
}

ConsistencyReport monodromy_consistency(const MonodromyData& d, const SystemCoefficients* sys,
                                        const std::vector<cd>& t, const NumericsParams& p) {
  ConsistencyReport rep;
  const int n = d.B1.rows();
  std::vector<cd> e2, em2;
  for (int a = 0; a < n; ++a) {
    e2.push_back(std::exp(cd(0, 2 * kPi) * d.B1(a, a)));
    em2.push_back(std::exp(cd(0, -2 * kPi) * d.B1(a, a)));
  }
  CMat E = CMat::diag(e2), Em = CMat::diag(em2);
  const CMat& S1 = d.S.at(0);
  const CMat& S2 = d.S.at(1);
  rep.M_inf_stokes = S1 * S2 * Em;
  CMat expL = expm(d.levelt.L0() * cd(0, -2 * kPi));
  rep.M_inf_levelt = solve(d.C0, expL * d.C0);
  CMat lhs = E * inverse(S1 * S2);
  CMat rhs = solve(d.C0, expm(d.levelt.L0() * cd(0, 2 * kPi)) * d.C0);
  rep.constraint = (lhs - rhs).max_abs();
  if (d.S.size() >= 3) rep.third = (d.S[2] - Em * S1 * E).max_abs();
  if (sys) {
    CoverPoint z0{p.r0, 0.0};
    CMat Y1 = d.levelt.evaluate(z0.r, z0.theta) * d.C0;
    std::vector<CoverPoint> loop;
    for (int q = 0; q <= 4; ++q) loop.push_back({p.r0, -2 * kPi * q / 4.0});
    auto pr = propagate_path(*sys, t, loop, Y1, p);
    rep.M_inf_numeric = solve(Y1, pr.Y);
    rep.round_trip = (rep.M_inf_numeric - rep.M_inf_stokes).max_abs();
    rep.wronskian = pr.wronskian_residual;
  }
  return rep;
}

RemainderDecay remainder_decay(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde, int K,
                               const std::vector<double>& radii, const NumericsParams& p) {
  RemainderDecay out;
  out.K = K;
  auto u = sys.u(t);
  const int n = sys.n;
  if (radii.size() < 2) throw input_error("ConfigInvalid", "remainder decay needs two radii");
  auto fs = coalesced(u) ? frozen_formal(sys, t, p.K_cap) : formal_coefficients(sys, t, p.K_cap);
  Coeffs c = coeffs_at(sys, t);
  double scale = 1.0;
  for (auto x : u) scale = std::max(scale, std::abs(x));
  Sector S = sector_from_rays(u, tau_tilde, 0);
  double lo = S.bisector(), hi = lo;
  if (std::isfinite(S.right) && std::isfinite(S.left)) {
    lo = S.right + p.margin;
    hi = S.left - p.margin;
  }
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end(), std::greater<>());
  out.r.assign(rs.size(), 0);
  out.remainder.assign(rs.size(), 0);
  for (int j = 0; j < n; ++j) {
    double th = column_direction(u, S, lo, hi, j, scale);
    double Rref = std::max(4 * rs.front(), 200.0);
    CoverPoint zR{Rref, th};
    auto fv = evaluate_formal_scaled(fs, zR, -1, p.K_cap);
    CMat w(n, 1);
    for (int a = 0; a < n; ++a) w(a, 0) = fv.Y(a, j);
    CoverPoint at = zR;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CoverPoint to{rs[i], th};
      w = integrate_leg(c, at, to, w, u[std::size_t(j)], p, nullptr);
      at = to;
      auto fk = evaluate_formal_scaled(fs, to, K, K);
      double d = 0;
      for (int a = 0; a < n; ++a) d = std::max(d, std::abs(w(a, 0) - fk.Y(a, j)));
      d /= std::abs(std::exp(fs.B1(j, j) * to.log()));
      out.r[i] = rs[i];
      out.remainder[i] = std::max(out.remainder[i], d);
    }
  }
  // least-squares slope of log remainder against log r
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = double(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double x = std::log(out.r[i]), y = std::log(std::max(out.remainder[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace iso
