#include "isostokes/isomono.hpp"

#include <cmath>

#include "isostokes/errors.hpp"
#include "isostokes/linalg.hpp"

namespace iso {

CMat deformation_direction(const SystemCoefficients& sys, int k) {
  CMat E(sys.n, sys.n);
  for (int a = 0; a < sys.n; ++a) E(a, a) = sys.tmap[std::size_t(a)][std::size_t(k)].c;
  return E;
}

namespace {

CMat comm(const CMat& a, const CMat& b) { return a * b - b * a; }

// Polynomial extrapolation to h = 0 through (h_i, v_i).
cd neville0(const std::vector<double>& h, std::vector<cd> v) {
  const std::size_t m = h.size();
  for (std::size_t lev = 1; lev < m; ++lev)
    for (std::size_t i = 0; i + lev < m; ++i)
      v[i] = (h[i + lev] * v[i] - h[i] * v[i + 1]) / (h[i + lev] - h[i]);
  return v[0];
}

DeformationForm assemble(const SystemCoefficients& sys, const std::vector<cd>& t, const CMat& F1, cd z) {
  DeformationForm f;
  f.t = t;
  f.z = z;
  f.F1 = F1;
  for (int k = 0; k < sys.arity(); ++k) {
    CMat E = deformation_direction(sys, k);
    CMat Th = comm(F1, E);
    f.Theta.push_back(Th);
    f.Omega.push_back(E * z + Th);
  }
  return f;
}

}  // namespace

DeformationForm omega_form(const SystemCoefficients& sys, const std::vector<cd>& t, const CMat& A1, cd z,
                           double tol) {
  auto u = sys.u(t);
  CMat F1(sys.n, sys.n);
  std::vector<std::pair<int, int>> lim;
  const double scale = std::max(1.0, A1.max_abs());
  for (int a = 0; a < sys.n; ++a)
    for (int b = 0; b < sys.n; ++b) {
      if (a == b) continue;
      cd d = u[std::size_t(b)] - u[std::size_t(a)];
      if (std::abs(d) > tol) {
        F1(a, b) = A1(a, b) / d;
      } else if (std::abs(A1(a, b)) <= tol * scale) {
        lim.emplace_back(a, b);
      } else {
        throw numeric_error("SingularAtDelta", "entry (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                                   ") of A1 does not vanish where u_a = u_b");
      }
    }
  auto f = assemble(sys, t, F1, z);
  f.limit_entries = lim;
  return f;
}

DeformationForm omega_form(const SystemCoefficients& sys, const std::vector<cd>& t, cd z, double tol) {
  CMat A1 = sys.A_at(1, t);
  auto f = omega_form(sys, t, A1, z, tol);
  if (f.limit_entries.empty()) return f;
  CMat F1 = f.F1;
  const std::vector<double> hs{0.02, 0.01, 0.005, 0.0025};
  for (auto [a, b] : f.limit_entries) {
    std::vector<cd> dir(std::size_t(sys.arity()));
    double nrm = 0;
    for (int k = 0; k < sys.arity(); ++k) {
      dir[std::size_t(k)] = std::conj(sys.tmap[std::size_t(b)][std::size_t(k)].c - sys.tmap[std::size_t(a)][std::size_t(k)].c);
      nrm += std::norm(dir[std::size_t(k)]);
    }
    if (nrm == 0) continue;  // never separated: the entry stays zero
    std::vector<cd> vals;
    for (double h : hs) {
      std::vector<cd> th = t;
      for (std::size_t k = 0; k < th.size(); ++k) th[k] += h * dir[k] / std::sqrt(nrm);
      auto uh = sys.u(th);
      vals.push_back(sys.A_at(1, th)(a, b) / (uh[std::size_t(b)] - uh[std::size_t(a)]));
    }
    F1(a, b) = neville0(hs, vals);
  }
  auto g = assemble(sys, t, F1, z);
  g.limit_entries = f.limit_entries;
  return g;
}

CMat deformation_field(const SystemCoefficients& sys, const std::vector<cd>& t, const CMat& A1, int k) {
  auto f = omega_form(sys, t, A1);
  return comm(f.Theta[std::size_t(k)], A1);
}

std::vector<FlowSample> flow(const SystemCoefficients& sys, const CMat& A1_init,
                             const std::vector<std::vector<cd>>& waypoints, const FlowParams& fp,
                             std::optional<CMat> G0_init) {
  if (waypoints.size() < 2) throw input_error("ConfigInvalid", "a flow path needs two waypoints");
  const int n = sys.n;
  const std::size_t nn = std::size_t(n * n);
  CMat G0 = G0_init ? *G0_init : diagonalize(A1_init).G;
  std::vector<cd> y(2 * nn);
  for (std::size_t i = 0; i < nn; ++i) {
    y[i] = A1_init.data()[i];
    y[nn + i] = G0.data()[i];
  }
  auto unpack = [&](const std::vector<cd>& x, std::size_t off) {
    CMat M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = x[off + std::size_t(i * n + j)];
    return M;
  };
  std::vector<FlowSample> out;
  auto record = [&](const std::vector<cd>& t) {
    FlowSample s;
    s.t = t;
    s.A1 = unpack(y, 0);
    s.G0 = unpack(y, nn);
    s.eigenvalues = eigenvalues(s.A1);
    try {
      s.signature = cell_signature(sys, t, fp.tau_tilde).str();
    } catch (const Error& e) {
      s.signature = e.code();
    }
    out.push_back(std::move(s));
  };
  record(waypoints.front());
  for (std::size_t leg = 0; leg + 1 < waypoints.size(); ++leg) {
    const auto& ta = waypoints[leg];
    const auto& tb = waypoints[leg + 1];
    OdeRhs rhs = [&](double s, const std::vector<cd>& x, std::vector<cd>& dx) {
      std::vector<cd> t(ta.size());
      for (std::size_t k = 0; k < t.size(); ++k) t[k] = ta[k] + s * (tb[k] - ta[k]);
      CMat A = unpack(x, 0), G = unpack(x, nn);
      DeformationForm f;
      try {
        f = omega_form(sys, t, A, 0, fp.delta_tol);
      } catch (const Error& e) {
        if (e.code() == "SingularAtDelta") throw numeric_error("DeltaHit", "flow path meets the coalescence locus");
        throw;
      }
      CMat Th(n, n);
      for (std::size_t k = 0; k < t.size(); ++k) Th += f.Theta[k] * (tb[k] - ta[k]);
      CMat dA = comm(Th, A), dG = Th * G;
      for (std::size_t i = 0; i < nn; ++i) {
        dx[i] = dA.data()[i];
        dx[nn + i] = dG.data()[i];
      }
    };
    for (int q = 0; q < fp.samples_per_leg; ++q) {
      double s0 = double(q) / fp.samples_per_leg, s1 = double(q + 1) / fp.samples_per_leg;
      try {
        y = dop853(rhs, s0, s1, y, fp.ode);
      } catch (const Error& e) {
        if (e.code() == "StepFailure") {
          std::string where;
          for (std::size_t k = 0; k < ta.size(); ++k) {
            cd tk = ta[k] + s0 * (tb[k] - ta[k]);
            where += " " + std::to_string(tk.real()) + (tk.imag() < 0 ? "" : "+") + std::to_string(tk.imag()) + "i";
          }
          throw numeric_error("BlowUp", "flow step size collapsed after t =" + where);
        }
        throw;
      }
      for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw numeric_error("BlowUp", "flow diverges");
      std::vector<cd> t(ta.size());
      for (std::size_t k = 0; k < t.size(); ++k) t[k] = ta[k] + s1 * (tb[k] - ta[k]);
      record(t);
    }
  }
  return out;
}

SystemCoefficients system_with_A1(const SystemCoefficients& base, const CMat& A1) {
  auto s = make_system(base.n, base.u0, base.partition, {CoefficientGenerator::constant(CoefMatrix(A1))}, base.tmap);
  s.label = base.label;
  return s;
}

CMat normalize_connection(const CMat& C0, const CMat& ref) {
  CMat out = C0;
  for (int i = 0; i < C0.rows(); ++i) {
    int jm = 0;
    for (int j = 1; j < C0.cols(); ++j)
      if (std::abs(ref(i, j)) > std::abs(ref(i, jm))) jm = j;
    cd piv = C0(i, jm);
    if (std::abs(piv) == 0) continue;
    for (int j = 0; j < C0.cols(); ++j) out(i, j) = C0(i, j) / piv;
  }
  return out;
}

IsomonodromyDeviation verify_isomonodromic(const SystemCoefficients& base, const SystemFamily& family,
                                           const std::vector<std::vector<cd>>& samples, double tau_tilde,
                                           const NumericsParams& p, double tol) {
  if (samples.empty()) throw input_error("ConfigInvalid", "no samples");
  IsomonodromyDeviation dev;
  dev.samples = samples;
  dev.tolerance = tol;
  auto sig0 = cell_signature(base, samples.front(), tau_tilde);
  for (const auto& t : samples)
    if (!(cell_signature(base, t, tau_tilde) == sig0))
      throw input_error("SamplesSpanCells", "samples lie in different tau~-cells");
  for (const auto& t : samples) dev.data.push_back(stokes_matrices(family(t), t, tau_tilde, p));
  const auto& d0 = dev.data.front();
  CMat ref = d0.C0;
  CMat C0n = normalize_connection(d0.C0, ref);
  for (const auto& d : dev.data) {
    for (std::size_t k = 0; k < d.S.size() && k < d0.S.size(); ++k)
      dev.stokes = std::max(dev.stokes, (d.S[k] - d0.S[k]).max_abs());
    dev.connection = std::max(dev.connection, (normalize_connection(d.C0, ref) - C0n).max_abs());
    dev.B1 = std::max(dev.B1, (d.B1 - d0.B1).max_abs());
  }
  dev.pass = dev.stokes <= tol && dev.connection <= tol && dev.B1 <= tol;
  return dev;
}

LimitReport coalescence_limit(const SystemCoefficients& sys, const std::vector<cd>& t_delta,
                              const std::vector<cd>& direction, const std::vector<double>& hs, double tau_tilde,
                              const NumericsParams& p, int K_trace) {
  LimitReport rep;
  try {
    auto vr = vanishing_report(sys, t_delta, std::max(4, K_trace));
    rep.vanishing_pass = vr.failures.empty();
    rep.vanishing_failures = vr.failures;
  } catch (const Error& e) {
    rep.vanishing_failures.push_back(e.what());
  }
  for (double h : hs) {
    LimitSample ls;
    ls.h = h;
    ls.t = t_delta;
    for (std::size_t k = 0; k < ls.t.size(); ++k) ls.t[k] += h * direction[k];
    auto d = stokes_matrices(sys, ls.t, tau_tilde, p);
    ls.S = d.S;
    for (const auto& S : d.S)
      for (int a = 0; a < sys.n; ++a)
        for (int b = 0; b < sys.n; ++b)
          if (a != b && sys.same_block(a, b)) ls.coalesced_entries = std::max(ls.coalesced_entries, std::abs(S(a, b)));
    auto fs = formal_coefficients(sys, ls.t, K_trace);
    for (int k = 1; k <= K_trace; ++k) ls.F_norm.push_back(fs.F[std::size_t(k)].max_abs());
    rep.max_coalesced_entry = std::max(rep.max_coalesced_entry, ls.coalesced_entries);
    rep.trace.push_back(std::move(ls));
  }
  if (!rep.trace.empty()) {
    const auto& first = rep.trace.front().S;
    for (const auto& ls : rep.trace)
      for (std::size_t k = 0; k < first.size(); ++k)
        rep.constancy = std::max(rep.constancy, (ls.S[k] - first[k]).max_abs());
    // extrapolate through the last (up to) three samples
    std::size_t m = std::min<std::size_t>(3, rep.trace.size());
    std::size_t off = rep.trace.size() - m;
    std::vector<double> h;
    for (std::size_t i = off; i < rep.trace.size(); ++i) h.push_back(rep.trace[i].h);
    for (std::size_t k = 0; k < first.size(); ++k) {
      CMat L(sys.n, sys.n);
      for (int a = 0; a < sys.n; ++a)
        for (int b = 0; b < sys.n; ++b) {
          std::vector<cd> v;
          for (std::size_t i = off; i < rep.trace.size(); ++i) v.push_back(rep.trace[i].S[k](a, b));
          L(a, b) = neville0(h, v);
        }
      rep.S_extrapolated.push_back(L);
    }
  }
  try {
    auto d = stokes_matrices(sys, t_delta, tau_tilde, p);
    rep.S_frozen = d.S;
    rep.limit_vs_frozen = 0;
    for (std::size_t k = 0; k < d.S.size() && k < rep.S_extrapolated.size(); ++k)
      rep.limit_vs_frozen = std::max(rep.limit_vs_frozen, (rep.S_extrapolated[k] - d.S[k]).max_abs());
  } catch (const Error& e) {
    rep.frozen_error = e.what();
  }
  return rep;
}

}  // namespace iso
