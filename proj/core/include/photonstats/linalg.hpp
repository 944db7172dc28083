#pragma once

#include <complex>

#include <Eigen/Dense>

namespace photonstats {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Throws DomainError unless `a` is square with finite entries.
void require_square_finite(const CMatrix& a, const char* what);

/// Largest absolute entry, or 0 for an empty matrix.
double max_abs(const CMatrix& a);

/// Swap matrix [[0, I], [I, 0]] of size 2*ell.
CMatrix swap_halves(int ell);

}  // namespace photonstats
