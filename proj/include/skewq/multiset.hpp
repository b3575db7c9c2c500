#pragma once

#include <cstdint>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace skewq {

/// Enumeration of the multisets of size `degree` drawn from {0, ..., dim-1},
/// in lexicographic order of their sorted index tuples. This is the storage
/// order of every symmetric tensor and symmetric kernel in the library.
class MultisetIndex {
public:
    MultisetIndex(int dim, int degree);

    int dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return count_; }

    /// Multiplicity vector alpha (length dim, sums to degree).
    std::span<const int> exponents(std::size_t rank) const;
    /// Sorted index tuple (length degree).
    std::span<const int> indices(std::size_t rank) const;
    /// Number of distinct orderings of the multiset: degree! / prod alpha_i!.
    double multiplicity(std::size_t rank) const { return multiplicity_[rank]; }

    std::size_t rank(std::span<const int> exponents) const;
    std::size_t rank_of_indices(std::span<const int> indices) const;

    /// Rank in the degree+1 enumeration of this multiset with index j added.
    std::size_t raised(std::size_t rank, int j) const;

private:
    std::uint64_t key(std::span<const int> exponents) const;

    int dim_;
    int degree_;
    std::size_t count_ = 0;
    std::vector<int> exponents_;
    std::vector<int> indices_;
    std::vector<double> multiplicity_;
    std::unordered_map<std::uint64_t, std::size_t> lookup_;
    mutable std::once_flag raise_once_;
    mutable std::vector<std::size_t> raise_;
};

/// Shared immutable index for (dim, degree); built on first use.
const MultisetIndex& multiset_index(int dim, int degree);

double factorial(int n);

/// C(dim + degree - 1, degree), with the conventions C(.,0) = 1 and 0 for
/// dim = 0, degree > 0.
std::size_t multiset_count(int dim, int degree);

} // namespace skewq
