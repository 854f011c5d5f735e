#pragma once
// Field-generic recursion for the formal solution
//   Y_F = (I + sum_k F_k z^{-k}) z^{B_1} e^{Lambda z},  B_1 = diag(A_1),
// of dY/dz = (Lambda + sum_k A_k z^{-k}) Y.  Comparing powers of z gives
//   Lambda F_l - F_l Lambda = -(l-1) F_{l-1} + F_{l-1} B_1 - sum_{k=1}^{l} A_k F_{l-k}.
// Pairs flagged as coalesced (u_a = u_b) use the frozen rule: their entry
// of F_{l-1} is fixed at level l by the factor (A1_aa - A1_bb + l - 1).
#include <functional>
#include <vector>

#include "isostokes/matrix.hpp"

namespace iso {

template <class F>
struct RecursionInput {
  std::vector<F> u;
  std::vector<Mat<F>> A;  // A[0] = A_1, ...; missing levels are zero
  std::vector<std::vector<bool>> coalesced;  // empty: nothing coalesced
  std::function<bool(const F&)> negligible;  // zero test for resonance factors
};

struct FreeEntry {
  int level = 0;  // F_level
  int a = 0, b = 0;
};

struct ResonanceCheck {
  int level = 0;  // the l of the obstruction
  int a = 0, b = 0;
  cd residual{0, 0};
  std::string exact_residual;  // filled in exact arithmetic
  bool ok = true;
};

template <class F>
struct RecursionOutput {
  std::vector<Mat<F>> Fk;  // Fk[0] = I, Fk[k] = F_k
  // E[l](a, b): the braced quantity with (u_a - u_b)(F_l)_ab = -E[l](a, b)
  std::vector<Mat<F>> E;
  std::vector<FreeEntry> free_entries;
  std::vector<ResonanceCheck> resonances;
  bool entries_vanish = true;  // A1_ab = 0 on every coalesced pair
};

namespace detail {
template <class F>
std::string exact_str(const F&) {
  return {};
}
template <>
inline std::string exact_str<GaussQ>(const GaussQ& x) {
  return to_string(x);
}
}  // namespace detail

template <class F>
RecursionOutput<F> run_recursion(const RecursionInput<F>& in, int K) {
  using T = FieldTraits<F>;
  const int n = static_cast<int>(in.u.size());
  auto A = [&](int k) -> Mat<F> {
    if (k >= 1 && k <= static_cast<int>(in.A.size())) return in.A[static_cast<std::size_t>(k - 1)];
    return Mat<F>(n, n);
  };
  auto coal = [&](int a, int b) {
    return !in.coalesced.empty() && in.coalesced[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  };
  auto zero_test = [&](const F& x) { return in.negligible ? in.negligible(x) : T::is_zero(x); };
  const Mat<F> A1 = A(1);

  RecursionOutput<F> out;
  out.Fk.push_back(Mat<F>::identity(n));
  out.E.push_back(Mat<F>(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && coal(a, b) && !zero_test(A1(a, b))) out.entries_vanish = false;

  // sum_{j=1}^{l-2} (A_{l-j} F_j)_ab
  auto mixed = [&](int l, int a, int b) {
    F s = T::zero();
    for (int j = 1; j <= l - 2; ++j) {
      Mat<F> Al = A(l - j);
      for (int g = 0; g < n; ++g) s = s + Al(a, g) * out.Fk[static_cast<std::size_t>(j)](g, b);
    }
    return s;
  };

  for (int l = 1; l <= K + 1; ++l) {
    Mat<F> Al = A(l);
    if (l >= 2) {
      Mat<F>& Fp = out.Fk[static_cast<std::size_t>(l - 1)];
      // diagonal of F_{l-1}
      for (int a = 0; a < n; ++a) {
        F s = -mixed(l, a, a) - Al(a, a);
        for (int g = 0; g < n; ++g)
          if (g != a) s = s - A1(a, g) * Fp(g, a);
        Fp(a, a) = s / T::from_int(l - 1);
      }
      // coalesced entries of F_{l-1}
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b || !coal(a, b)) continue;
          F rhs = -mixed(l, a, b) - Al(a, b);
          for (int g = 0; g < n; ++g)
            if (g != a && !coal(a, g)) rhs = rhs - A1(a, g) * Fp(g, b);
          F factor = A1(a, a) - A1(b, b) + T::from_int(l - 1);
          if (zero_test(factor)) {
            ResonanceCheck rc;
            rc.level = l;
            rc.a = a;
            rc.b = b;
            rc.residual = T::to_cd(rhs);
            rc.exact_residual = detail::exact_str(rhs);
            rc.ok = zero_test(rhs);
            out.resonances.push_back(rc);
            out.free_entries.push_back(FreeEntry{l - 1, a, b});
            Fp(a, b) = T::zero();
          } else {
            Fp(a, b) = rhs / factor;
          }
        }
    }
    if (l == K + 1) break;
    // off-diagonal, non-coalesced entries of F_l
    Mat<F> Fl(n, n), El(n, n);
    const Mat<F>& Fp = out.Fk[static_cast<std::size_t>(l - 1)];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b || coal(a, b)) continue;
        F e;
        if (l == 1) {
          e = A1(a, b);
        } else {
          e = (A1(a, a) - A1(b, b) + T::from_int(l - 1)) * Fp(a, b) + mixed(l, a, b) + Al(a, b);
          for (int g = 0; g < n; ++g)
            if (g != a) e = e + A1(a, g) * Fp(g, b);
        }
        El(a, b) = e;
        Fl(a, b) = -e / (in.u[static_cast<std::size_t>(a)] - in.u[static_cast<std::size_t>(b)]);
      }
    out.Fk.push_back(std::move(Fl));
    out.E.push_back(std::move(El));
  }
  return out;
}

}  // namespace iso
