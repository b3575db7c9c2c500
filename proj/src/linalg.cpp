#include "skewq/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace skewq {

SymmetricEigen symmetric_eigen(const Matrix& a)
{
    const Eigen::Index n = a.rows();
    SymmetricEigen out{Vector(n), Matrix(n, n)};
    if (n == 0)
        return out;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // Eigen returns ascending values; reverse, keeping ties in solver order.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return solver.eigenvalues()(i) > solver.eigenvalues()(j);
    });
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = solver.eigenvalues()(src);
        Vector v = solver.eigenvectors().col(src);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0)
            v = -v;
        out.vectors.col(k) = v;
    }
    return out;
}

double min_eigenvalue(const Matrix& symmetric)
{
    if (symmetric.rows() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(symmetric), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double spectral_norm(const Matrix& a)
{
    if (a.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

double spectral_abscissa(const Matrix& a)
{
    if (a.rows() == 0)
        return -std::numeric_limits<double>::infinity();
    Eigen::EigenSolver<Matrix> solver(a, false);
    return solver.eigenvalues().real().maxCoeff();
}

Matrix symmetrized(const Matrix& a)
{
    return 0.5 * (a + a.transpose());
}

Matrix clip_to_psd(const Matrix& symmetric)
{
    if (symmetric.rows() == 0)
        return symmetric;
    const SymmetricEigen eig = symmetric_eigen(symmetric);
    const Vector clipped = eig.values.cwiseMax(0.0);
    return symmetrized(eig.vectors * clipped.asDiagonal() * eig.vectors.transpose());
}

Matrix pseudo_inverse(const Matrix& a, double rel_tol)
{
    if (a.size() == 0)
        return Matrix::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double cutoff = rel_tol * std::max(1.0, s(0));
    Vector inv(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        inv(i) = s(i) > cutoff ? 1.0 / s(i) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix matrix_exponential(const Matrix& a)
{
    if (a.rows() == 0)
        return a;
    return a.exp();
}

double max_abs(const Matrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

} // namespace skewq
