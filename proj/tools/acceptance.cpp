// Acceptance run: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "isostokes/cells.hpp"
#include "isostokes/connect.hpp"
#include "isostokes/errors.hpp"
#include "isostokes/formal.hpp"
#include "isostokes/golden.hpp"
#include "isostokes/isomono.hpp"
#include "isostokes/linalg.hpp"
#include "isostokes/painleve.hpp"
#include "isostokes/scenario.hpp"

using namespace iso;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void need(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [fail]");
  }
  void info(const std::string& what) { detail << (detail.tellp() > 0 ? "; " : "") << what; }
};

std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << x;
  return s.str();
}

double rel_err(const CMat& got, const CMat& want) {
  double w = 0;
  for (int a = 0; a < got.rows(); ++a)
    for (int b = 0; b < got.cols(); ++b)
      w = std::max(w, std::abs(got(a, b) - want(a, b)) / std::max(1.0, std::abs(want(a, b))));
  return w;
}

const json& check_named(const json& report, const std::string& name) {
  for (const auto& c : report.at("checks"))
    if (c["name"] == name) return c;
  throw std::runtime_error("missing check " + name);
}

json painleve_report() {
  static json rep = run_scenario(json{{"version", 1}, {"kind", "painleve-a3"}}).report;
  return rep;
}

// 1
void ei_stokes(Outcome& o) {
  auto sys = ei_system();
  for (double t : {0.3, 0.5}) {
    auto d = stokes_matrices(sys, {t}, 0.0);
    CMat want = CMat::identity(2);
    want(1, 0) = cd(0, 2 * kPi * t * t);
    double e = rel_err(d.S[1], want);
    double e0 = rel_err(d.S[0], CMat::identity(2));
    o.need(e <= 1e-6, "t=" + std::to_string(t).substr(0, 3) + " S(2,1) err " + sci(e));
    o.need(e0 <= 1e-6, "companion matrix is I, err " + sci(e0));
  }
  auto lim = coalescence_limit(sys, {0.0}, {1.0}, {0.02, 0.01, 0.005}, 0.0);
  double e = 0;
  for (const auto& S : lim.S_extrapolated) e = std::max(e, (S - CMat::identity(2)).max_abs());
  o.need(!lim.S_extrapolated.empty() && e <= 1e-7, "t->0 limit vs I " + sci(e));
}

// 2
void a3_stokes(Outcome& o) {
  const json rep = painleve_report();
  const auto& c1 = check_named(rep, "S1_matches_reference");
  const auto& c2 = check_named(rep, "S2_matches_reference");
  const auto& hk = check_named(rep, "numeric_vs_hankel");
  o.need(c1["pass"].get<bool>(), "numeric S1 vs reference err " + sci(c1["value"].get<double>()));
  o.need(c2["pass"].get<bool>(), "numeric S2 vs reference err " + sci(c2["value"].get<double>()));
  o.need(hk["pass"].get<bool>(), "Hankel route vs numeric " + sci(hk["value"].get<double>()));
  const auto& jv = check_named(rep, "J_variant_matches_reference");
  o.detail << "; J-variant vs reference " << sci(jv["value"].get<double>());
  if (!c1["pass"].get<bool>())
    o.detail << "; computed S1=[[1,0,-1],[0,1,1],[0,0,1]], S2=[[1,0,0],[0,1,0],[1,-1,1]]: the reference signs "
                "come from a cyclic relation with +sqrt2 instead of 2cos(3pi/4)=-sqrt2 (residual "
             << sci(rep["results"]["stokes"]["displayed_cyclic_residual"].get<double>()) << " vs "
             << sci(rep["results"]["stokes"]["cyclic_residual"].get<double>()) << ")";
}

// 3
void ei_formal(Outcome& o) {
  auto sys = ei_system();
  for (auto [p, q] : {std::pair{1, 2}, std::pair{3, 10}, std::pair{7, 5}}) {
    Rational t(p, q);
    auto fs = formal_coefficients_exact(sys, {GaussQ(t)}, 6);
    bool ok = true;
    Rational fact = 1;
    for (int k = 1; k <= 6; ++k) {
      fact *= k;
      Rational want = (k % 2 ? -1 : 1) * fact;
      for (int j = 1; j < k; ++j) want /= t;
      ok = ok && (*fs.Fq)[std::size_t(k)](1, 0) == GaussQ(want);
    }
    o.need(ok, "t=" + std::to_string(p) + "/" + std::to_string(q) + " exact");
  }
}

// 4
void vanishing(Outcome& o) {
  auto vr = vanishing_report(ei_system(), {0.0}, 6);
  const ObstructionCheck* first = nullptr;
  for (const auto& ob : vr.obstructions)
    if (!ob.ok && (!first || ob.level < first->level)) first = &ob;
  bool ok = vr.exact && !vr.holomorphic && first && first->level == 2 && first->exact_residual == "-2";
  o.need(ok, "Ei fails at l=" + (first ? std::to_string(first->level) + " residual " + first->exact_residual : "none") +
                 (vr.exact ? " (exact)" : " (float)"));
  auto vs = vanishing_report(a3_family_system(), {0.0}, 6);
  o.need(vs.holomorphic, std::string("skew family ") + (vs.holomorphic ? "passes" : "fails"));
}

// 5
int count_cells(const SystemCoefficients& sys, CellScope scope) {
  auto rb = radius_bound(sys, 0.0);
  double eps = rb.unbounded ? 1.0 : 0.9 * rb.value;
  return enumerate_cells(sys, 0.0, eps, scope).count;
}

void cells(Outcome& o) {
  int r = count_cells(roots_system(), CellScope::Local);
  int l = count_cells(example1_system(), CellScope::Local);
  int g = count_cells(example1_system(), CellScope::Global);
  o.need(r == 8, "roots example " + std::to_string(r));
  o.need(l == 2, "example 1 local " + std::to_string(l));
  o.need(g == 3, "example 1 global " + std::to_string(g));
}

// 6
void a3_branch_data(Outcome& o) {
  const json rep = painleve_report();
  for (const char* n : {"taylor_coefficients_exact", "omega_series_coefficients_exact", "omega_closed_form_vs_series",
                        "omega_limits"}) {
    const auto& c = check_named(rep, n);
    o.need(c["pass"].get<bool>(), std::string(n) + " " + sci(c["value"].get<double>()));
  }
}

// 7
void a3_limit(Outcome& o) {
  auto sys = a3_family_system();
  auto rep = coalescence_limit(sys, {0.0}, {1.0}, {0.15, 0.08, 0.04, 0.02, 0.01, 0.005, 0.002}, 0.0);
  o.need(rep.constancy <= 1e-6, "constancy " + sci(rep.constancy));
  o.need(rep.max_coalesced_entry <= 1e-7, "(1,2)/(2,1) entries " + sci(rep.max_coalesced_entry));
  o.need(rep.limit_vs_frozen >= 0 && rep.limit_vs_frozen <= 1e-6, "limit vs frozen " + sci(rep.limit_vs_frozen));
  auto hk = a3_frozen_stokes_hankel();
  double e = rep.S_extrapolated.size() >= 2
                 ? std::max(rel_err(rep.S_extrapolated[0], hk.S1), rel_err(rep.S_extrapolated[1], hk.S2))
                 : INFINITY;
  o.need(e <= 1e-6, "limit vs Hankel closed form " + sci(e));
}

// 8
void consistency(Outcome& o) {
  auto ei = ei_system();
  for (double t : {0.3, 0.5}) {
    auto d = stokes_matrices(ei, {t}, 0.0);
    auto c = monodromy_consistency(d, &ei, {t});
    double w = std::max({c.constraint, c.round_trip, c.third});
    o.need(w <= 1e-8, "Ei t=" + std::to_string(t).substr(0, 3) + " " + sci(w));
  }
  auto a3 = a3_frozen_system(false);
  auto d = stokes_matrices(a3, {0.0}, 0.0);
  auto c = monodromy_consistency(d, &a3, {0.0});
  double w = std::max({c.constraint, c.round_trip, c.third});
  o.need(w <= 1e-8, "A3 frozen " + sci(w));
}

// 9
SystemCoefficients random_system(std::mt19937_64& rng, int n, bool skew, double amp) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<Num> u0;
  for (int a = 0; a < n; ++a) {
    cd base = std::polar(2.0, 2 * kPi * a / n + 0.4 * N(rng));
    u0.emplace_back(base + cd(0.2 * N(rng), 0.2 * N(rng)));
  }
  CMat A(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) A(a, b) = amp * cd(N(rng), N(rng));
  if (skew) A = (A - A.transpose()) * 0.5;
  return make_system(n, u0, {}, {CoefficientGenerator::constant(CoefMatrix(A))});
}

double min_gap(const std::vector<cd>& u) {
  double g = INFINITY;
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b) g = std::min(g, std::abs(u[a] - u[b]));
  return g;
}

double spectrum_distance(std::vector<cd> a, std::vector<cd> b) {
  auto key = [](cd x, cd y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  double w = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

void properties(Outcome& o) {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> N(0.0, 1.0);
  // flows
  double iso = 0, sk = 0, fd = 0;
  for (int i = 0; i < 20; ++i) {
    SystemCoefficients sys;
    std::vector<cd> t0(3), t1(3);
    do {
      sys = random_system(rng, 3, true, 0.4);
      for (auto& x : t1) x = 0.25 * cd(N(rng), N(rng));
    } while (min_gap(sys.u(t0)) < 1.0 || min_gap(sys.u(t1)) < 1.0);
    CMat A1 = sys.A_at(1, t0);
    auto fl = flow(sys, A1, {t0, t1});
    auto ev0 = eigenvalues(A1);
    for (const auto& s : fl) {
      iso = std::max(iso, spectrum_distance(s.eigenvalues, ev0));
      sk = std::max(sk, (s.A1 + s.A1.transpose()).max_abs());
    }
    if (i < 5) {
      // central difference of the flow against the vector field
      const double h = 2e-4;
      int k = i % 3;
      auto tp = t0, tm = t0;
      tp[std::size_t(k)] += h;
      tm[std::size_t(k)] -= h;
      CMat Ap = flow(sys, A1, {t0, tp}).back().A1, Am = flow(sys, A1, {t0, tm}).back().A1;
      CMat an = deformation_field(sys, t0, A1, k);
      fd = std::max(fd, ((Ap - Am) * (1 / (2 * h)) - an).max_abs() / an.max_abs());
    }
  }
  // closed-form skew family
  {
    auto fam = a3_family_closed_form();
    for (cd t : {cd(0.05), cd(0.1), cd(0.08, 0.03)}) {
      const double h = 1e-4;
      CMat d = (fam.A_at(1, {t + h}) - fam.A_at(1, {t - h})) * (1 / (2 * h));
      CMat an = deformation_field(fam, {t}, fam.A_at(1, {t}), 0);
      fd = std::max(fd, (d - an).max_abs() / an.max_abs());
    }
  }
  o.need(iso <= 1e-9, "isospectral " + sci(iso));
  o.need(sk <= 1e-9, "skew " + sci(sk));
  o.need(fd <= 1e-6, "deformation field FD " + sci(fd));
  // Stokes structure on random systems. Gated on n = 2, 3; four-level systems are
  // reported only, their accuracy is limited by single-radius matching in doubles.
  double pat = 0, pat4 = 0;
  int done = 0, done4 = 0;
  for (int i = 0; done < 20 && i < 200; ++i) {
    int n = 2 + i % 3;
    auto sys = random_system(rng, n, false, 0.5);
    std::vector<cd> t(std::size_t(n), 0.0);
    if (min_gap(sys.u(t)) < 0.5) continue;
    try {
      auto d = stokes_matrices(sys, t, 0.1);
      double w = std::max(d.quality.unit_diagonal, d.quality.off_pattern);
      if (n == 4) {
        pat4 = std::max(pat4, w);
        ++done4;
      } else {
        pat = std::max(pat, w);
        ++done;
      }
    } catch (const Error& e) {
      if (std::string(e.code()) != "NotAdmissible") throw;
    }
  }
  o.need(done == 20 && pat <= 1e-8, std::to_string(done) + " random systems (n=2,3), pattern " + sci(pat));
  o.info(std::to_string(done4) + " systems with n=4 (not gated), pattern " + sci(pat4));
  // Hankel cyclic relation
  auto hk = a3_frozen_stokes_hankel();
  o.need(hk.cyclic_residual <= 1e-10, "cyclic relation " + sci(hk.cyclic_residual));
  // remainder slopes
  double worst = INFINITY;
  for (const auto& [sys, t] : {std::pair{ei_system(), std::vector<cd>{0.5}},
                                std::pair{a3_family_system(), std::vector<cd>{0.1}}})
    for (int K = 1; K <= 4; ++K) {
      auto rd = remainder_decay(sys, t, 0.0, K, {10, 14, 20, 28, 40});
      worst = std::min(worst, -rd.slope - (K - 0.1));
    }
  o.need(worst >= 0, "remainder slope margin over K-0.1 " + sci(worst));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only, known;
  app.add_option("--only", only, "run these criteria");
  app.add_option("--known-failures", known,
                 "exit 0 when exactly these criteria fail (the FAIL lines are still printed)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<void(Outcome&)>>> crit{
      {1, ei_stokes}, {2, a3_stokes},   {3, ei_formal},   {4, vanishing}, {5, cells},
      {6, a3_branch_data}, {7, a3_limit}, {8, consistency}, {9, properties}};
  std::set<int> failed;
  for (const auto& [id, fn] : crit) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << (o.detail.tellp() > 0 ? "; " : "") << "error: " << e.what();
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) failed.insert(id);
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail.str() << "  ("
              << std::fixed << std::setprecision(2) << sec << " s)" << std::endl;
  }
  if (app.count("--known-failures")) {
    std::set<int> k(known.begin(), known.end());
    if (!only.empty()) {
      std::set<int> sel(only.begin(), only.end()), kk;
      for (int x : k)
        if (sel.count(x)) kk.insert(x);
      k = kk;
    }
    return failed == k ? 0 : 1;
  }
  return failed.empty() ? 0 : 1;
}
