#pragma once
#include <algorithm>
#include <vector>

#include "isostokes/errors.hpp"
#include "isostokes/scalar.hpp"

namespace iso {

// Dense row-major matrix over any field type with FieldTraits.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows * cols), FieldTraits<T>::zero()) {
    if (rows < 0 || cols < 0) throw input_error("DimensionMismatch", "negative matrix size");
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = FieldTraits<T>::one();
    return m;
  }
  static Mat diag(const std::vector<T>& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  bool square() const { return r_ == c_; }

  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * c_ + j)]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * c_ + j)]; }
  const std::vector<T>& data() const { return a_; }

  Mat& operator+=(const Mat& o) {
    same_shape(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    same_shape(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Mat& operator*=(const T& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, const T& s) { return a *= s; }
  friend Mat operator*(const T& s, Mat a) { return a *= s; }
  Mat operator-() const {
    Mat m(*this);
    for (auto& x : m.a_) x = -x;
    return m;
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_) throw input_error("DimensionMismatch", "matrix product shapes");
    Mat m(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (FieldTraits<T>::is_zero(x)) continue;
        for (int j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }

  friend bool operator==(const Mat& a, const Mat& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

  Mat transpose() const {
    Mat m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Mat diagonal_part() const {
    Mat m(r_, c_);
    for (int i = 0; i < std::min(r_, c_); ++i) m(i, i) = (*this)(i, i);
    return m;
  }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const T& x) { return FieldTraits<T>::is_zero(x); });
  }

  double max_abs() const {
    double m = 0;
    for (const auto& x : a_) m = std::max(m, FieldTraits<T>::magnitude(x));
    return m;
  }

  template <class F>
  auto map(F f) const -> Mat<decltype(f(std::declval<T>()))> {
    Mat<decltype(f(std::declval<T>()))> m(r_, c_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(i, j) = f((*this)(i, j));
    return m;
  }

 private:
  void same_shape(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw input_error("DimensionMismatch", "matrix shapes differ");
  }
  int r_ = 0, c_ = 0;
  std::vector<T> a_;
};

template <class T>
Mat<T> commutator(const Mat<T>& a, const Mat<T>& b) {
  return a * b - b * a;
}

using CMat = Mat<cd>;
using QMat = Mat<GaussQ>;

inline CMat to_cmat(const QMat& q) {
  return q.map([](const GaussQ& x) { return x.to_cd(); });
}
inline QMat to_qmat(const CMat& c) {
  return c.map([](const cd& x) { return gauss_from_cd(x); });
}

inline double max_abs_diff(const CMat& a, const CMat& b) { return (a - b).max_abs(); }

}  // namespace iso
