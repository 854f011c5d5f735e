#pragma once
#include <Eigen/Dense>

#include "isostokes/matrix.hpp"

namespace iso {

Eigen::MatrixXcd to_eigen(const CMat& m);
CMat from_eigen(const Eigen::MatrixXcd& m);

cd det(const CMat& m);
CMat inverse(const CMat& m);
// Solves m x = b; throws Singular when m is numerically singular.
CMat solve(const CMat& m, const CMat& b);
double cond2(const CMat& m);
CMat expm(const CMat& m);
double frobenius(const CMat& m);

struct Diagonalization {
  std::vector<cd> eigenvalues;
  CMat G;  // columns are eigenvectors, largest component scaled to 1
  double residual = 0;  // max |G^{-1} M G - diag|
  double condition = 0;
};

// G^{-1} M G = diag(eigenvalues). Throws NotDiagonalizable when the
// eigenvector matrix has condition number above 1/tol.
Diagonalization diagonalize(const CMat& m, double tol = 1e-10);

std::vector<cd> eigenvalues(const CMat& m);

}  // namespace iso
