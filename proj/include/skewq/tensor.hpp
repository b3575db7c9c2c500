#pragma once

#include <span>
#include <vector>

#include "skewq/linalg.hpp"

namespace skewq {

/// Plain n-fold tensor over R^dim, row-major over its n axes.
class DenseTensor {
public:
    DenseTensor(int dim, int degree);
    DenseTensor(int dim, int degree, std::vector<double> data);

    int dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    double& at(std::span<const int> index);
    double at(std::span<const int> index) const;

    double norm() const;

private:
    std::size_t offset(std::span<const int> index) const;

    int dim_;
    int degree_;
    std::vector<double> data_;
};

/// Symmetric n-tensor over R^dim in multiset storage.
///
/// The coefficient stored for a multiset alpha is the sum of the dense entries
/// over all orderings of alpha, i.e. the coefficient of x^alpha in the
/// homogeneous polynomial <t, x^{(x)n}>. With this convention the normalised
/// symmetrisation of e_i (x) e_j has coefficient 1 on {i, j}, and
/// <s, t> = sum_alpha s_alpha t_alpha / M(alpha) with M(alpha) the number of
/// orderings of alpha reproduces the full-tensor Euclidean inner product.
class SymTensor {
public:
    SymTensor(int dim, int degree);
    SymTensor(int dim, int degree, std::vector<double> coeffs);

    static SymTensor scalar(int dim, double value);

    int dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<double> coeffs() noexcept { return coeffs_; }
    double operator[](std::size_t rank) const { return coeffs_[rank]; }
    double& operator[](std::size_t rank) { return coeffs_[rank]; }

    /// Coefficient addressed by its multiplicity vector.
    double coefficient(std::span<const int> exponents) const;

    double norm() const;

    SymTensor& operator+=(const SymTensor& other);
    SymTensor& operator-=(const SymTensor& other);
    SymTensor& operator*=(double factor);

private:
    int dim_;
    int degree_;
    std::vector<double> coeffs_;
};

SymTensor operator+(SymTensor a, const SymTensor& b);
SymTensor operator-(SymTensor a, const SymTensor& b);
SymTensor operator*(double factor, SymTensor t);

double inner(const SymTensor& a, const SymTensor& b);

/// Normalised symmetrising projection (1/n!) sum_{sigma in S_n}; idempotent.
SymTensor symmetrize(const DenseTensor& t);
DenseTensor to_dense(const SymTensor& t);

/// h (x) ... (x) h (n factors).
SymTensor sym_power(const Vector& h, int n);

/// Applies A^{(.)n} for A : R^{d1} -> R^{d2} (A is d2 x d1) to a symmetric
/// tensor over R^{d1}. Implemented as the polynomial substitution
/// p(x) -> p(A^T y) in multiset coordinates.
SymTensor lift_map(const Matrix& a, const SymTensor& t);

/// Matrix of A^{(.)n} in multiset coordinates (columns = images of the
/// basis tensors with a single unit coefficient).
Matrix lift_matrix(const Matrix& a, int n);

/// Truncated symmetric Fock space element (f_0, ..., f_N).
class FockVector {
public:
    FockVector(int dim, int truncation);
    explicit FockVector(std::vector<SymTensor> components);

    int dim() const noexcept { return dim_; }
    int truncation() const noexcept { return static_cast<int>(components_.size()) - 1; }

    const SymTensor& operator[](int n) const { return components_[static_cast<std::size_t>(n)]; }
    SymTensor& operator[](int n) { return components_[static_cast<std::size_t>(n)]; }
    const std::vector<SymTensor>& components() const noexcept { return components_; }

    /// sum_n ||f_n||^2, square-rooted.
    double norm() const;

    static FockVector vacuum(int dim, int truncation);

private:
    int dim_;
    std::vector<SymTensor> components_;
};

double inner(const FockVector& a, const FockVector& b);
FockVector operator-(const FockVector& a, const FockVector& b);

/// Second quantisation truncated at the vector's degree: componentwise
/// lift_map(A, .).
FockVector fock_apply(const Matrix& a, const FockVector& v);

} // namespace skewq
