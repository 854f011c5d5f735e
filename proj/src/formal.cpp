#include "isostokes/formal.hpp"

#include <cmath>

#include "isostokes/laurent.hpp"

namespace iso {

namespace {

template <class F>
std::vector<std::vector<bool>> coalesced_pairs(const std::vector<F>& u, double tol) {
  const std::size_t n = u.size();
  std::vector<std::vector<bool>> c(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      if constexpr (FieldTraits<F>::exact) {
        c[a][b] = u[a] == u[b];
      } else {
        cd x = FieldTraits<F>::to_cd(u[a]), y = FieldTraits<F>::to_cd(u[b]);
        c[a][b] = std::abs(x - y) <= tol * (1.0 + std::abs(x) + std::abs(y));
      }
    }
  return c;
}

bool any_true(const std::vector<std::vector<bool>>& c) {
  for (const auto& r : c)
    for (bool x : r)
      if (x) return true;
  return false;
}

FormalSolution pack(const RecursionOutput<cd>& out, const std::vector<cd>& t, const std::vector<cd>& u, int K,
                    const CMat& A1) {
  FormalSolution fs;
  fs.t = t;
  fs.u = u;
  fs.K = K;
  fs.F = out.Fk;
  fs.B1 = A1.diagonal_part();
  fs.mode = ArithmeticMode::Floating;
  fs.free_entries = out.free_entries;
  fs.resonances = out.resonances;
  fs.unique = out.free_entries.empty();
  return fs;
}

FormalSolution pack_exact(const RecursionOutput<GaussQ>& out, const std::vector<GaussQ>& t,
                          const std::vector<GaussQ>& u, int K, const QMat& A1) {
  FormalSolution fs;
  fs.t = to_cd(t);
  fs.u = to_cd(u);
  fs.K = K;
  for (const auto& m : out.Fk) fs.F.push_back(to_cmat(m));
  fs.Fq = out.Fk;
  fs.B1q = A1.diagonal_part();
  fs.B1 = to_cmat(*fs.B1q);
  fs.mode = ArithmeticMode::Exact;
  fs.free_entries = out.free_entries;
  fs.resonances = out.resonances;
  fs.unique = out.free_entries.empty();
  return fs;
}

void require_exact(const SystemCoefficients& sys) {
  if (!sys.exact()) throw input_error("NotExact", "exact mode needs exact u0, eigenvalue map and coefficients");
}

}  // namespace

FormalSolution formal_coefficients(const SystemCoefficients& sys, const std::vector<cd>& t, int K, double tol) {
  if (K < 0) throw input_error("ConfigInvalid", "K must be nonnegative");
  auto u = sys.u(t);
  if (any_true(coalesced_pairs(u, tol)))
    throw input_error("AtCoalescence", "t lies on the coalescence locus; use the frozen recursion");
  RecursionInput<cd> in;
  in.u = u;
  for (int k = 1; k <= K + 1; ++k) in.A.push_back(sys.A_at(k, t));
  auto out = run_recursion(in, K);
  return pack(out, t, u, K, in.A.front());
}

FormalSolution formal_coefficients_exact(const SystemCoefficients& sys, const std::vector<GaussQ>& t, int K) {
  require_exact(sys);
  if (K < 0) throw input_error("ConfigInvalid", "K must be nonnegative");
  auto u = sys.u_exact(t);
  if (any_true(coalesced_pairs(u, 0)))
    throw input_error("AtCoalescence", "t lies on the coalescence locus; use the frozen recursion");
  RecursionInput<GaussQ> in;
  in.u = u;
  for (int k = 1; k <= K + 1; ++k) in.A.push_back(sys.A_exact(k, t));
  auto out = run_recursion(in, K);
  return pack_exact(out, t, u, K, in.A.front());
}

namespace {

// Candidate approach directions; the first one splitting every coalesced pair wins.
template <class T>
std::vector<std::vector<T>> direction_candidates(int m) {
  std::vector<std::vector<T>> c;
  for (int s = 0; s < 4; ++s) {
    std::vector<T> d;
    for (int j = 0; j < m; ++j) {
      GaussQ g(Rational(j + 2 + s, 1), Rational((j + 1) * (j + 1) + 3 * s, 3 + s));
      if constexpr (std::is_same_v<T, GaussQ>)
        d.push_back(g);
      else
        d.push_back(g.to_cd());
    }
    c.push_back(d);
  }
  return c;
}

template <class T>
T tmap_entry(const Num& x) {
  if constexpr (std::is_same_v<T, GaussQ>) {
    return *x.q;
  } else {
    return x.c;
  }
}

template <class T>
VanishingReport vanishing_impl(const SystemCoefficients& sys, const std::vector<T>& td, int L, double tol,
                               std::vector<T> direction) {
  using LT = Laurent<T>;
  constexpr bool exact = FieldTraits<T>::exact;
  if (L < 1) throw input_error("ConfigInvalid", "L must be at least 1");
  for (const auto& g : sys.A)
    if (!g.polynomial()) throw input_error("NotPolynomial", "vanishing report needs polynomial coefficient generators");
  const int n = sys.n, m = sys.arity();
  if (static_cast<int>(td.size()) != m) throw input_error("DimensionMismatch", "t_delta has wrong arity");

  std::vector<T> ud;
  if constexpr (exact) {
    ud = sys.u_exact(td);
  } else {
    ud = sys.u(td);
  }
  auto coal = coalesced_pairs(ud, 1e-12);
  if (!any_true(coal)) throw input_error("NotOnDelta", "no eigenvalues coalesce at t_delta");
  // snap coalesced eigenvalues to a common value
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b)
      if (coal[std::size_t(a)][std::size_t(b)]) ud[std::size_t(a)] = ud[std::size_t(b)];

  auto slope_of = [&](const std::vector<T>& d) {
    std::vector<T> s(std::size_t(n), FieldTraits<T>::zero());
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < m; ++j) s[std::size_t(a)] += tmap_entry<T>(sys.tmap[std::size_t(a)][std::size_t(j)]) * d[std::size_t(j)];
    return s;
  };
  auto splits = [&](const std::vector<T>& s) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (coal[std::size_t(a)][std::size_t(b)]) {
          if constexpr (exact) {
            if (s[std::size_t(a)] == s[std::size_t(b)]) return false;
          } else {
            if (std::abs(s[std::size_t(a)] - s[std::size_t(b)]) < 1e-9) return false;
          }
        }
    return true;
  };
  std::vector<T> slope;
  if (!direction.empty()) {
    if (static_cast<int>(direction.size()) != m) throw input_error("DimensionMismatch", "direction has wrong arity");
    slope = slope_of(direction);
    if (!splits(slope)) throw input_error("DegenerateDirection", "approach direction keeps a pair coalesced");
  } else {
    for (auto& d : direction_candidates<T>(m)) {
      auto s = slope_of(d);
      if (splits(s)) {
        direction = d;
        slope = s;
        break;
      }
    }
    if (slope.empty()) throw input_error("DegenerateDirection", "no approach direction splits the coalesced pairs");
  }

  LT::cap() = 2 * L + 10;
  const int cap = LT::cap();
  RecursionInput<LT> in;
  for (int a = 0; a < n; ++a) in.u.push_back(LT::from_coeffs(0, {ud[std::size_t(a)], slope[std::size_t(a)]}, cap));
  std::vector<LT> tl;
  for (int j = 0; j < m; ++j) tl.push_back(LT::from_coeffs(0, {td[std::size_t(j)], direction[std::size_t(j)]}, cap));
  for (int k = 1; k <= L + 1; ++k) {
    if (k > sys.levels()) {
      in.A.push_back(Mat<LT>(n, n));
      continue;
    }
    in.A.push_back(sys.A[std::size_t(k - 1)].eval_in<LT>(tl, [](const CoefMatrix& c, int a, int b) {
      if constexpr (exact) {
        return LT((*c.q)(a, b));
      } else {
        return LT(c.c(a, b));
      }
    }));
  }
  auto out = run_recursion(in, L);

  VanishingReport rep;
  rep.t_delta = [&] {
    std::vector<cd> v;
    for (const auto& x : td) v.push_back(FieldTraits<T>::to_cd(x));
    return v;
  }();
  for (const auto& x : direction) rep.direction.push_back(FieldTraits<T>::to_cd(x));
  rep.L = L;
  rep.exact = exact;

  // A1 at t_delta
  Mat<T> A1d(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) A1d(a, b) = in.A[0](a, b).coef(0);
  double scale = 1.0;
  for (int k = 0; k < static_cast<int>(in.A.size()); ++k) scale = std::max(scale, in.A[std::size_t(k)].max_abs());
  const double atol = tol * scale;
  auto negligible = [&](const T& x) {
    if constexpr (exact) {
      return FieldTraits<T>::is_zero(x);
    } else {
      return std::abs(x) <= atol;
    }
  };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!coal[std::size_t(a)][std::size_t(b)]) continue;
      EntryCheck ec;
      ec.a = a;
      ec.b = b;
      ec.value = FieldTraits<T>::to_cd(A1d(a, b));
      if constexpr (exact) ec.exact_value = to_string(A1d(a, b));
      ec.ok = negligible(A1d(a, b));
      if (!ec.ok) {
        rep.holomorphic = false;
        rep.failures.push_back("entry (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ") of A1 nonzero");
      }
      rep.entries.push_back(ec);
      for (int l = 2; l <= L; ++l) {
        const LT& E = out.E[std::size_t(l)](a, b);
        if (E.prec() <= 0) throw numeric_error("PrecisionLost", "Laurent precision exhausted");
        ObstructionCheck oc;
        oc.level = l;
        oc.a = a;
        oc.b = b;
        T factor = A1d(a, a) - A1d(b, b) + FieldTraits<T>::from_int(l - 1);
        oc.resonant = negligible(factor);
        oc.order = E.prec();
        for (int e = E.val(); e < E.prec(); ++e)
          if (!negligible(E.coef(e))) {
            oc.order = e;
            break;
          }
        if (oc.order <= 0) {
          oc.ok = false;
          oc.residual = FieldTraits<T>::to_cd(E.coef(oc.order));
          if constexpr (exact) oc.exact_residual = to_string(E.coef(oc.order));
          rep.holomorphic = false;
          rep.failures.push_back("level " + std::to_string(l) + " pair (" + std::to_string(a + 1) + "," +
                                 std::to_string(b + 1) + ") obstruction does not vanish");
        } else if constexpr (exact) {
          oc.exact_residual = "0";
        }
        rep.obstructions.push_back(oc);
      }
    }

  // conditions at t_delta itself (resonant levels of the frozen recursion)
  bool entries_ok = true;
  for (const auto& e : rep.entries) entries_ok = entries_ok && e.ok;
  if (entries_ok) {
    RecursionInput<T> fin;
    fin.u = ud;
    fin.coalesced = coal;
    for (int k = 1; k <= L + 1; ++k) {
      Mat<T> Ak(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) Ak(a, b) = in.A[std::size_t(k - 1)](a, b).coef(0);
      fin.A.push_back(Ak);
    }
    fin.negligible = negligible;
    auto fout = run_recursion(fin, L - 1);
    for (const auto& rc : fout.resonances) {
      rep.frozen_resonances.push_back(rc);
      if (!rc.ok) {
        rep.holomorphic = false;
        rep.failures.push_back("resonant condition at t_delta fails at level " + std::to_string(rc.level));
      }
    }
  }
  return rep;
}

template <class T>
FormalSolution frozen_impl(const SystemCoefficients& sys, const std::vector<T>& td, int K, double tol) {
  constexpr bool exact = FieldTraits<T>::exact;
  const int n = sys.n;
  RecursionInput<T> in;
  if constexpr (exact) {
    in.u = sys.u_exact(td);
    for (int k = 1; k <= K + 1; ++k) in.A.push_back(sys.A_exact(k, td));
  } else {
    in.u = sys.u(td);
    for (int k = 1; k <= K + 1; ++k) in.A.push_back(sys.A_at(k, td));
  }
  in.coalesced = coalesced_pairs(in.u, 1e-12);
  if (!any_true(in.coalesced)) throw input_error("NotOnDelta", "no eigenvalues coalesce at t_delta");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b)
      if (in.coalesced[std::size_t(a)][std::size_t(b)]) in.u[std::size_t(a)] = in.u[std::size_t(b)];
  double scale = 1.0;
  for (const auto& A : in.A) scale = std::max(scale, A.max_abs());
  if constexpr (!exact) in.negligible = [atol = tol * scale](const cd& x) { return std::abs(x) <= atol; };
  auto out = run_recursion(in, K);
  if (!out.entries_vanish)
    throw numeric_error("VanishingConditionsFail", "A1 has nonzero entries between coalesced eigenvalues");
  for (const auto& rc : out.resonances)
    if (!rc.ok)
      throw numeric_error("VanishingConditionsFail",
                          "resonant obstruction at level " + std::to_string(rc.level) + " does not vanish");
  FormalSolution fs;
  if constexpr (exact) {
    fs = pack_exact(out, td, in.u, K, in.A.front());
  } else {
    fs = pack(out, td, in.u, K, in.A.front());
  }
  fs.frozen = true;
  return fs;
}

}  // namespace

VanishingReport vanishing_report(const SystemCoefficients& sys, const std::vector<cd>& t_delta, int L, double tol,
                                 std::vector<cd> direction) {
  if (sys.exact()) {
    // exact whenever the point and direction are exactly representable
    std::vector<GaussQ> tq, dq;
    for (auto x : t_delta) tq.push_back(gauss_from_cd(x));
    for (auto x : direction) dq.push_back(gauss_from_cd(x));
    return vanishing_impl<GaussQ>(sys, tq, L, 0, dq);
  }
  return vanishing_impl<cd>(sys, t_delta, L, tol, std::move(direction));
}

VanishingReport vanishing_report_exact(const SystemCoefficients& sys, const std::vector<GaussQ>& t_delta, int L,
                                       std::vector<GaussQ> direction) {
  require_exact(sys);
  return vanishing_impl<GaussQ>(sys, t_delta, L, 0, std::move(direction));
}

FormalSolution frozen_formal(const SystemCoefficients& sys, const std::vector<cd>& t_delta, int K, double tol) {
  return frozen_impl<cd>(sys, t_delta, K, tol);
}

FormalSolution frozen_formal_exact(const SystemCoefficients& sys, const std::vector<GaussQ>& t_delta, int K) {
  require_exact(sys);
  return frozen_impl<GaussQ>(sys, t_delta, K, 0);
}

double recursion_residual(const SystemCoefficients& sys, const FormalSolution& fs) {
  const int n = sys.n;
  CMat Lam = CMat::diag(fs.u);
  double worst = 0;
  for (int l = 1; l <= fs.K; ++l) {
    const CMat& Fl = fs.F[std::size_t(l)];
    const CMat& Fp = fs.F[std::size_t(l - 1)];
    CMat R = Lam * Fl - Fl * Lam + Fp * cd(double(l - 1)) - Fp * fs.B1;
    for (int k = 1; k <= l; ++k) R += sys.A_at(k, fs.t) * fs.F[std::size_t(l - k)];
    if (fs.frozen) {
      // coalesced entries carry no equation at this level
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (a != b && std::abs(fs.u[std::size_t(a)] - fs.u[std::size_t(b)]) == 0) R(a, b) = 0;
    }
    worst = std::max(worst, R.max_abs() / (1.0 + Fl.max_abs() + Fp.max_abs()));
  }
  return worst;
}

bool recursion_residual_exact_zero(const SystemCoefficients& sys, const std::vector<GaussQ>& t,
                                   const FormalSolution& fs) {
  if (!fs.Fq || !fs.B1q) throw input_error("NotExact", "formal solution has no exact coefficients");
  auto u = sys.u_exact(t);
  QMat Lam = QMat::diag(u);
  const auto& F = *fs.Fq;
  for (int l = 1; l <= fs.K; ++l) {
    QMat R = Lam * F[std::size_t(l)] - F[std::size_t(l)] * Lam + F[std::size_t(l - 1)] * GaussQ(l - 1) -
             F[std::size_t(l - 1)] * *fs.B1q;
    for (int k = 1; k <= l; ++k) R += sys.A_exact(k, t) * F[std::size_t(l - k)];
    if (!R.is_zero()) return false;
  }
  return true;
}

}  // namespace iso
