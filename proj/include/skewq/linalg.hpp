#pragma once

#include <complex>

#include <Eigen/Dense>

namespace skewq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;
/// Row-major sample batch: one draw per row.
using SampleBatch = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted in
/// decreasing order. Ties keep the solver's order, and every eigenvector is
/// sign-normalised so that its largest-magnitude entry is positive.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& a);

double min_eigenvalue(const Matrix& symmetric);
double spectral_norm(const Matrix& a);

/// Largest real part of the spectrum of a square matrix.
double spectral_abscissa(const Matrix& a);

Matrix symmetrized(const Matrix& a);

/// Projects a nearly PSD symmetric matrix onto the PSD cone by clipping
/// negative eigenvalues to zero.
Matrix clip_to_psd(const Matrix& symmetric);

Matrix pseudo_inverse(const Matrix& a, double rel_tol = 1e-12);

Matrix matrix_exponential(const Matrix& a);

/// Max-abs entry of a matrix.
double max_abs(const Matrix& a);

} // namespace skewq
