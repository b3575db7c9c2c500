#include "skewq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skewq/error.hpp"
#include "skewq/multiset.hpp"

namespace skewq {

namespace {

std::size_t dense_size(int dim, int degree)
{
    std::size_t s = 1;
    for (int k = 0; k < degree; ++k)
        s *= static_cast<std::size_t>(dim);
    return s;
}

void require(bool ok, const std::string& message)
{
    if (!ok)
        throw DimensionMismatch(message);
}

} // namespace

DenseTensor::DenseTensor(int dim, int degree)
    : dim_(dim), degree_(degree), data_(dense_size(dim, degree), 0.0)
{
}

DenseTensor::DenseTensor(int dim, int degree, std::vector<double> data)
    : dim_(dim), degree_(degree), data_(std::move(data))
{
    require(data_.size() == dense_size(dim, degree), "DenseTensor: data length is not dim^degree");
}

std::size_t DenseTensor::offset(std::span<const int> index) const
{
    require(index.size() == static_cast<std::size_t>(degree_), "DenseTensor: index arity");
    std::size_t off = 0;
    for (int i : index) {
        require(i >= 0 && i < dim_, "DenseTensor: index out of range");
        off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return off;
}

double& DenseTensor::at(std::span<const int> index)
{
    return data_[offset(index)];
}

double DenseTensor::at(std::span<const int> index) const
{
    return data_[offset(index)];
}

double DenseTensor::norm() const
{
    double s = 0.0;
    for (double v : data_)
        s += v * v;
    return std::sqrt(s);
}

SymTensor::SymTensor(int dim, int degree)
    : dim_(dim), degree_(degree), coeffs_(multiset_count(dim, degree), 0.0)
{
}

SymTensor::SymTensor(int dim, int degree, std::vector<double> coeffs)
    : dim_(dim), degree_(degree), coeffs_(std::move(coeffs))
{
    require(coeffs_.size() == multiset_count(dim, degree),
            "SymTensor: coefficient count must be C(d+n-1, n)");
}

SymTensor SymTensor::scalar(int dim, double value)
{
    return SymTensor(dim, 0, {value});
}

double SymTensor::coefficient(std::span<const int> exponents) const
{
    return coeffs_[multiset_index(dim_, degree_).rank(exponents)];
}

double SymTensor::norm() const
{
    return std::sqrt(std::max(0.0, inner(*this, *this)));
}

SymTensor& SymTensor::operator+=(const SymTensor& other)
{
    require(dim_ == other.dim_ && degree_ == other.degree_, "SymTensor +=: shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& other)
{
    require(dim_ == other.dim_ && degree_ == other.degree_, "SymTensor -=: shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SymTensor& SymTensor::operator*=(double factor)
{
    for (double& c : coeffs_)
        c *= factor;
    return *this;
}

SymTensor operator+(SymTensor a, const SymTensor& b)
{
    return a += b;
}

SymTensor operator-(SymTensor a, const SymTensor& b)
{
    return a -= b;
}

SymTensor operator*(double factor, SymTensor t)
{
    return t *= factor;
}

double inner(const SymTensor& a, const SymTensor& b)
{
    require(a.dim() == b.dim() && a.degree() == b.degree(), "inner: shape mismatch");
    const MultisetIndex& idx = multiset_index(a.dim(), a.degree());
    double s = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r)
        s += a[r] * b[r] / idx.multiplicity(r);
    return s;
}

SymTensor symmetrize(const DenseTensor& t)
{
    const int d = t.dim();
    const int n = t.degree();
    SymTensor out(d, n);
    if (n == 0) {
        out[0] = t.data()[0];
        return out;
    }
    const MultisetIndex& idx = multiset_index(d, n);
    std::vector<int> tuple(static_cast<std::size_t>(n), 0);
    std::vector<int> alpha(static_cast<std::size_t>(d));
    for (double value : t.data()) {
        std::fill(alpha.begin(), alpha.end(), 0);
        for (int i : tuple)
            ++alpha[static_cast<std::size_t>(i)];
        out[idx.rank(alpha)] += value;
        for (int p = n - 1; p >= 0; --p) {
            if (++tuple[static_cast<std::size_t>(p)] < d)
                break;
            tuple[static_cast<std::size_t>(p)] = 0;
        }
    }
    return out;
}

DenseTensor to_dense(const SymTensor& t)
{
    const int d = t.dim();
    const int n = t.degree();
    DenseTensor out(d, n);
    if (n == 0) {
        out.data()[0] = t[0];
        return out;
    }
    const MultisetIndex& idx = multiset_index(d, n);
    std::vector<int> tuple(static_cast<std::size_t>(n), 0);
    std::vector<int> sorted(static_cast<std::size_t>(n));
    for (double& value : out.data()) {
        std::copy(tuple.begin(), tuple.end(), sorted.begin());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t r = idx.rank_of_indices(sorted);
        value = t[r] / idx.multiplicity(r);
        for (int p = n - 1; p >= 0; --p) {
            if (++tuple[static_cast<std::size_t>(p)] < d)
                break;
            tuple[static_cast<std::size_t>(p)] = 0;
        }
    }
    return out;
}

SymTensor sym_power(const Vector& h, int n)
{
    if (n < 0)
        throw std::invalid_argument("sym_power: negative degree");
    const int d = static_cast<int>(h.size());
    SymTensor out(d, n);
    const MultisetIndex& idx = multiset_index(d, n);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        double mono = idx.multiplicity(r);
        for (int i : idx.indices(r))
            mono *= h(i);
        out[r] = mono;
    }
    return out;
}

SymTensor lift_map(const Matrix& a, const SymTensor& t)
{
    require(a.cols() == t.dim(), "lift_map: matrix columns must equal tensor dimension");
    const int d_in = t.dim();
    const int d_out = static_cast<int>(a.rows());
    const int n = t.degree();
    SymTensor out(d_out, n);
    if (n == 0) {
        out[0] = t[0];
        return out;
    }
    if (d_out == 0 || d_in == 0)
        return out;

    // Depth-first over nondecreasing input tuples; partial[m] holds the product
    // of the linear forms l_k(y) = sum_j a(j,k) y_j chosen so far (degree m).
    const MultisetIndex& in_idx = multiset_index(d_in, n);
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(n) + 1);
    partial[0] = {1.0};
    std::vector<int> tuple(static_cast<std::size_t>(n));
    std::vector<int> alpha(static_cast<std::size_t>(d_in));

    auto extend = [&](int depth, int k) {
        const MultisetIndex& idx = multiset_index(d_out, depth);
        const std::vector<double>& src = partial[static_cast<std::size_t>(depth)];
        std::vector<double>& dst = partial[static_cast<std::size_t>(depth) + 1];
        dst.assign(multiset_count(d_out, depth + 1), 0.0);
        for (std::size_t r = 0; r < src.size(); ++r) {
            if (src[r] == 0.0)
                continue;
            for (int j = 0; j < d_out; ++j) {
                const double c = a(j, k);
                if (c != 0.0)
                    dst[idx.raised(r, j)] += src[r] * c;
            }
        }
    };

    auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == n) {
            std::fill(alpha.begin(), alpha.end(), 0);
            for (int i : tuple)
                ++alpha[static_cast<std::size_t>(i)];
            const double c = t[in_idx.rank(alpha)];
            if (c == 0.0)
                return;
            const std::vector<double>& poly = partial[static_cast<std::size_t>(n)];
            for (std::size_t r = 0; r < poly.size(); ++r)
                out[r] += c * poly[r];
            return;
        }
        for (int k = start; k < d_in; ++k) {
            tuple[static_cast<std::size_t>(depth)] = k;
            extend(depth, k);
            self(self, depth + 1, k);
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

Matrix lift_matrix(const Matrix& a, int n)
{
    const int d_in = static_cast<int>(a.cols());
    const int d_out = static_cast<int>(a.rows());
    const std::size_t cols = multiset_count(d_in, n);
    Matrix m(static_cast<Eigen::Index>(multiset_count(d_out, n)), static_cast<Eigen::Index>(cols));
    for (std::size_t c = 0; c < cols; ++c) {
        SymTensor unit(d_in, n);
        unit[c] = 1.0;
        const SymTensor img = lift_map(a, unit);
        for (std::size_t r = 0; r < img.size(); ++r)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = img[r];
    }
    return m;
}

FockVector::FockVector(int dim, int truncation) : dim_(dim)
{
    if (truncation < 0)
        throw std::invalid_argument("FockVector: negative truncation");
    components_.reserve(static_cast<std::size_t>(truncation) + 1);
    for (int n = 0; n <= truncation; ++n)
        components_.emplace_back(dim, n);
}

FockVector::FockVector(std::vector<SymTensor> components) : dim_(0), components_(std::move(components))
{
    if (components_.empty())
        throw std::invalid_argument("FockVector: needs at least the degree-0 component");
    dim_ = components_.front().dim();
    for (std::size_t n = 0; n < components_.size(); ++n) {
        require(components_[n].degree() == static_cast<int>(n), "FockVector: component degree mismatch");
        require(components_[n].dim() == dim_, "FockVector: component dimension mismatch");
    }
}

double FockVector::norm() const
{
    return std::sqrt(std::max(0.0, inner(*this, *this)));
}

FockVector FockVector::vacuum(int dim, int truncation)
{
    FockVector v(dim, truncation);
    v[0][0] = 1.0;
    return v;
}

double inner(const FockVector& a, const FockVector& b)
{
    require(a.truncation() == b.truncation() && a.dim() == b.dim(), "Fock inner: shape mismatch");
    double s = 0.0;
    for (int n = 0; n <= a.truncation(); ++n)
        s += inner(a[n], b[n]);
    return s;
}

FockVector operator-(const FockVector& a, const FockVector& b)
{
    require(a.truncation() == b.truncation(), "Fock difference: truncation mismatch");
    std::vector<SymTensor> out;
    for (int n = 0; n <= a.truncation(); ++n)
        out.push_back(a[n] - b[n]);
    return FockVector(std::move(out));
}

FockVector fock_apply(const Matrix& a, const FockVector& v)
{
    std::vector<SymTensor> out;
    out.reserve(v.components().size());
    for (const SymTensor& t : v.components())
        out.push_back(lift_map(a, t));
    return FockVector(std::move(out));
}

} // namespace skewq
