#pragma once
#include <algorithm>
#include <vector>

#include "isostokes/errors.hpp"
#include "isostokes/scalar.hpp"

namespace iso {

// Truncated Laurent series sum_{e >= val} c_e h^e + O(h^prec) over T.
// Precision is tracked the p-adic way: each operation knows how many
// coefficients of its result are determined by its inputs.
template <class T>
class Laurent {
 public:
  // Absolute precision given to exactly known inputs (constants, polynomials).
  static int& cap() {
    thread_local int c = 32;
    return c;
  }

  Laurent() : val_(0), prec_(cap()) {}
  Laurent(const T& x) : val_(0), prec_(cap()) {  // NOLINT: scalars promote
    if (!FieldTraits<T>::is_zero(x)) c_.push_back(x);
  }
  static Laurent from_coeffs(int val, std::vector<T> c, int prec) {
    Laurent l;
    l.val_ = val;
    l.prec_ = prec;
    if (static_cast<int>(c.size()) > prec - val) c.resize(static_cast<std::size_t>(std::max(0, prec - val)));
    l.c_ = std::move(c);
    return l;
  }
  static Laurent monomial(const T& x, int e) { return from_coeffs(e, {x}, cap() + std::max(0, e)); }

  int val() const { return val_; }
  int prec() const { return prec_; }
  T coef(int e) const {
    if (e >= prec_) throw numeric_error("PrecisionLost", "Laurent coefficient beyond known precision");
    int k = e - val_;
    if (k < 0 || k >= static_cast<int>(c_.size())) return FieldTraits<T>::zero();
    return c_[static_cast<std::size_t>(k)];
  }
  // First exponent with a nonzero known coefficient, or prec() if none.
  int order() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (!FieldTraits<T>::is_zero(c_[k])) return val_ + static_cast<int>(k);
    return prec_;
  }

  friend Laurent operator+(const Laurent& a, const Laurent& b) { return a.combine(b, false); }
  friend Laurent operator-(const Laurent& a, const Laurent& b) { return a.combine(b, true); }
  Laurent operator-() const {
    Laurent r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Laurent& operator+=(const Laurent& b) { return *this = *this + b; }
  Laurent& operator-=(const Laurent& b) { return *this = *this - b; }
  Laurent& operator*=(const Laurent& b) { return *this = *this * b; }
  Laurent& operator/=(const Laurent& b) { return *this = *this / b; }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    int va = a.order(), vb = b.order();
    int prec = std::min(va + b.prec_, vb + a.prec_);
    int val = va + vb;
    std::vector<T> c(static_cast<std::size_t>(std::max(0, prec - val)), FieldTraits<T>::zero());
    for (int i = va; i < a.prec_ && i - va < static_cast<int>(c.size()); ++i) {
      T x = a.coef(i);
      if (FieldTraits<T>::is_zero(x)) continue;
      for (int j = vb; j < b.prec_ && i + j < prec; ++j) c[static_cast<std::size_t>(i + j - val)] += x * b.coef(j);
    }
    return from_coeffs(val, std::move(c), prec);
  }

  friend Laurent operator/(const Laurent& a, const Laurent& b) {
    int vb = b.order();
    if (vb >= b.prec_) throw numeric_error("DivisionByZero", "Laurent divisor has no known nonzero coefficient");
    int rel = b.prec_ - vb;  // relative precision of the divisor
    // inverse of the unit part u = b / h^vb
    T u0 = b.coef(vb);
    std::vector<T> inv(static_cast<std::size_t>(rel), FieldTraits<T>::zero());
    inv[0] = FieldTraits<T>::one() / u0;
    for (int k = 1; k < rel; ++k) {
      T s = FieldTraits<T>::zero();
      for (int j = 1; j <= k; ++j) s += b.coef(vb + j) * inv[static_cast<std::size_t>(k - j)];
      inv[static_cast<std::size_t>(k)] = -s / u0;
    }
    Laurent ui = from_coeffs(0, std::move(inv), rel);
    Laurent shifted = a;
    shifted.val_ -= vb;
    shifted.prec_ -= vb;
    return shifted * ui;
  }

  friend bool operator==(const Laurent& a, const Laurent& b) { return (a - b).order() >= std::min(a.prec_, b.prec_); }

 private:
  Laurent combine(const Laurent& b, bool sub) const {
    int val = std::min(val_, b.val_);
    int prec = std::min(prec_, b.prec_);
    std::vector<T> c(static_cast<std::size_t>(std::max(0, prec - val)), FieldTraits<T>::zero());
    for (int e = val; e < prec; ++e) {
      T x = coef_or_zero(e);
      T y = b.coef_or_zero(e);
      c[static_cast<std::size_t>(e - val)] = sub ? x - y : x + y;
    }
    return from_coeffs(val, std::move(c), prec);
  }
  T coef_or_zero(int e) const {
    int k = e - val_;
    if (k < 0 || k >= static_cast<int>(c_.size())) return FieldTraits<T>::zero();
    return c_[static_cast<std::size_t>(k)];
  }

  int val_;
  int prec_;
  std::vector<T> c_;
};

template <class T>
struct FieldTraits<Laurent<T>> {
  static Laurent<T> zero() { return Laurent<T>(); }
  static Laurent<T> one() { return Laurent<T>(FieldTraits<T>::one()); }
  static Laurent<T> from_int(long long k) { return Laurent<T>(FieldTraits<T>::from_int(k)); }
  static bool is_zero(const Laurent<T>& x) { return x.order() >= x.prec(); }
  static double magnitude(const Laurent<T>& x) {
    double m = 0;
    for (int e = x.val(); e < x.prec(); ++e) m = std::max(m, FieldTraits<T>::magnitude(x.coef(e)));
    return m;
  }
  static cd to_cd(const Laurent<T>& x) { return FieldTraits<T>::to_cd(x.coef(0)); }
  static constexpr bool exact = FieldTraits<T>::exact;
};

}  // namespace iso
