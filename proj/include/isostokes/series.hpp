#pragma once
#include <vector>

#include "isostokes/matrix.hpp"

namespace iso {

enum class SeriesVariable { InvZAtInfinity, ZAtZero };

// c_0 + c_1 x + ... + c_K x^K with x = 1/z or x = z.
template <class T>
struct MatrixSeries {
  SeriesVariable variable = SeriesVariable::InvZAtInfinity;
  std::vector<Mat<T>> c;

  int order() const { return static_cast<int>(c.size()) - 1; }
  int rows() const { return c.empty() ? 0 : c.front().rows(); }
  int cols() const { return c.empty() ? 0 : c.front().cols(); }

  void check() const {
    for (const auto& m : c)
      if (m.rows() != rows() || m.cols() != cols())
        throw input_error("DimensionMismatch", "series coefficients differ in shape");
  }

  // Product truncated at min(order) of the factors.
  friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
    if (a.variable != b.variable) throw input_error("DimensionMismatch", "series in different variables");
    int K = std::min(a.order(), b.order());
    MatrixSeries r;
    r.variable = a.variable;
    for (int k = 0; k <= K; ++k) {
      Mat<T> s(a.rows(), b.cols());
      for (int j = 0; j <= k; ++j) s += a.c[static_cast<std::size_t>(j)] * b.c[static_cast<std::size_t>(k - j)];
      r.c.push_back(std::move(s));
    }
    return r;
  }

  friend MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b) {
    int K = std::min(a.order(), b.order());
    MatrixSeries r;
    r.variable = a.variable;
    for (int k = 0; k <= K; ++k) r.c.push_back(a.c[static_cast<std::size_t>(k)] + b.c[static_cast<std::size_t>(k)]);
    return r;
  }
};

}  // namespace iso
