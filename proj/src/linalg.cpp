#include "isostokes/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace iso {

Eigen::MatrixXcd to_eigen(const CMat& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

CMat from_eigen(const Eigen::MatrixXcd& e) {
  CMat m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

cd det(const CMat& m) {
  if (!m.square()) throw input_error("DimensionMismatch", "determinant of non-square matrix");
  if (m.rows() == 0) return 1.0;
  return to_eigen(m).fullPivLu().determinant();
}

CMat inverse(const CMat& m) { return solve(m, CMat::identity(m.rows())); }

CMat solve(const CMat& m, const CMat& b) {
  if (!m.square() || m.rows() != b.rows()) throw input_error("DimensionMismatch", "solve shapes");
  auto lu = to_eigen(m).fullPivLu();
  if (!lu.isInvertible()) throw numeric_error("Singular", "matrix is numerically singular");
  return from_eigen(lu.solve(to_eigen(b)));
}

double cond2(const CMat& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  double lo = s(s.size() - 1);
  return lo == 0 ? std::numeric_limits<double>::infinity() : s(0) / lo;
}

CMat expm(const CMat& m) {
  Eigen::MatrixXcd e = to_eigen(m);
  return from_eigen(e.exp());
}

double frobenius(const CMat& m) { return to_eigen(m).norm(); }

std::vector<cd> eigenvalues(const CMat& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), false);
  std::vector<cd> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

Diagonalization diagonalize(const CMat& m, double tol) {
  if (!m.square()) throw input_error("DimensionMismatch", "diagonalize needs a square matrix");
  const int n = m.rows();
  Diagonalization d;
  if (n == 0) {
    d.G = CMat(0, 0);
    d.condition = 1;
    return d;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
  if (es.info() != Eigen::Success) throw numeric_error("NotDiagonalizable", "eigen solver did not converge");
  Eigen::MatrixXcd V = es.eigenvectors();
  for (int j = 0; j < n; ++j) {
    Eigen::Index k = 0;
    V.col(j).cwiseAbs().maxCoeff(&k);
    V.col(j) /= V(k, j);
  }
  d.G = from_eigen(V);
  for (int i = 0; i < n; ++i) d.eigenvalues.push_back(es.eigenvalues()(i));
  d.condition = cond2(d.G);
  if (!(d.condition * tol < 1.0))
    throw numeric_error("NotDiagonalizable", "eigenvector matrix condition " + std::to_string(d.condition));
  CMat D = inverse(d.G) * m * d.G;
  for (int i = 0; i < n; ++i) D(i, i) -= d.eigenvalues[static_cast<std::size_t>(i)];
  d.residual = D.max_abs();
  return d;
}

}  // namespace iso
