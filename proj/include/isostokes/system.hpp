#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isostokes/laurent.hpp"
#include "isostokes/matrix.hpp"

namespace iso {

// A number that may be known exactly; the floating value is always filled.
struct Num {
  cd c{0.0, 0.0};
  std::optional<GaussQ> q;

  Num() = default;
  Num(cd z) : c(z) {}  // NOLINT
  Num(double x) : c(x) {}  // NOLINT
  Num(const GaussQ& g) : c(g.to_cd()), q(g) {}  // NOLINT
  bool exact() const { return q.has_value(); }
};

// A matrix coefficient, exact when every entry is.
struct CoefMatrix {
  CMat c;
  std::optional<QMat> q;

  CoefMatrix() = default;
  explicit CoefMatrix(const CMat& m) : c(m) {}
  explicit CoefMatrix(const QMat& m) : c(to_cmat(m)), q(m) {}
  bool exact() const { return q.has_value(); }
};

// t^e * M, with e a multi-index over the deformation parameters.
struct Monomial {
  std::vector<int> exps;
  CoefMatrix coef;
};

using MatrixFunction = std::function<CMat(const std::vector<cd>&)>;

// Matrix-valued generator of one coefficient A_k(t): a polynomial in t,
// or an opaque function (floating mode only).
class CoefficientGenerator {
 public:
  CoefficientGenerator() = default;
  static CoefficientGenerator constant(const CoefMatrix& m);
  static CoefficientGenerator polynomial(std::vector<Monomial> terms);
  static CoefficientGenerator function(int n, MatrixFunction f);

  bool exact() const;
  bool polynomial() const { return !fn_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int size() const { return n_; }

  CMat eval(const std::vector<cd>& t) const;
  QMat eval_exact(const std::vector<GaussQ>& t) const;

  // Evaluation over another field F, with a conversion from each
  // coefficient entry. Only for polynomial generators.
  template <class F, class Conv>
  Mat<F> eval_in(const std::vector<F>& t, Conv conv) const {
    if (fn_) throw input_error("NotPolynomial", "generator is an opaque function");
    Mat<F> out(n_, n_);
    for (const auto& m : terms_) {
      F w = FieldTraits<F>::one();
      for (std::size_t j = 0; j < m.exps.size(); ++j)
        for (int p = 0; p < m.exps[j]; ++p) w = w * t[j];
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
          F e = conv(m.coef, a, b);
          if (FieldTraits<F>::is_zero(e)) continue;
          out(a, b) = out(a, b) + e * w;
        }
    }
    return out;
  }

 private:
  int n_ = 0;
  std::vector<Monomial> terms_;
  MatrixFunction fn_;
};

// dY/dz = (Lambda(t) + sum_k A_k(t) z^{-k}) Y with Lambda(t) = diag(u(t)),
// u(t) = u0 + M t. The default M is the identity (t-arity n).
struct SystemCoefficients {
  int n = 0;
  std::vector<Num> u0;
  std::vector<int> partition;
  std::vector<std::vector<Num>> tmap;  // n rows, arity columns
  std::vector<CoefficientGenerator> A;  // A[k-1] generates A_k(t)
  std::string label;

  int arity() const { return tmap.empty() ? 0 : static_cast<int>(tmap.front().size()); }
  int levels() const { return static_cast<int>(A.size()); }
  bool exact() const;

  std::vector<cd> u(const std::vector<cd>& t) const;
  std::vector<GaussQ> u_exact(const std::vector<GaussQ>& t) const;
  CMat Lambda(const std::vector<cd>& t) const;
  // A_k(t) for k >= 1; zero beyond the stored levels.
  CMat A_at(int k, const std::vector<cd>& t) const;
  QMat A_exact(int k, const std::vector<GaussQ>& t) const;
  // Block index of each eigenvalue at t = 0.
  std::vector<int> block_of() const;
  // True when u_a(0) = u_b(0).
  bool same_block(int a, int b) const;
};

// Validates dimensions and the coalescence partition of u0.
SystemCoefficients make_system(int n, std::vector<Num> u0, std::vector<int> partition,
                               std::vector<CoefficientGenerator> generators,
                               std::vector<std::vector<Num>> tmap = {});

// Identity map t_a -> u_a as used when no map is given.
std::vector<std::vector<Num>> identity_tmap(int n);

std::vector<cd> to_cd(const std::vector<GaussQ>& v);

}  // namespace iso
