#include "skewq/multiset.hpp"

#include <map>
#include <memory>
#include <stdexcept>

namespace skewq {

double factorial(int n)
{
    double f = 1.0;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

std::size_t multiset_count(int dim, int degree)
{
    if (degree == 0)
        return 1;
    if (dim == 0)
        return 0;
    // C(dim + degree - 1, degree), computed incrementally to stay exact.
    std::size_t c = 1;
    for (int k = 1; k <= degree; ++k)
        c = c * static_cast<std::size_t>(dim - 1 + k) / static_cast<std::size_t>(k);
    return c;
}

MultisetIndex::MultisetIndex(int dim, int degree) : dim_(dim), degree_(degree)
{
    if (dim < 0 || degree < 0)
        throw std::invalid_argument("MultisetIndex: negative dim or degree");
    count_ = multiset_count(dim, degree);
    exponents_.reserve(count_ * static_cast<std::size_t>(dim));
    indices_.reserve(count_ * static_cast<std::size_t>(degree));
    multiplicity_.reserve(count_);

    std::vector<int> tuple(static_cast<std::size_t>(degree), 0);
    std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
    const double n_fact = factorial(degree);
    auto emit = [&] {
        std::fill(alpha.begin(), alpha.end(), 0);
        for (int i : tuple)
            ++alpha[static_cast<std::size_t>(i)];
        double denom = 1.0;
        for (int a : alpha)
            denom *= factorial(a);
        lookup_.emplace(key(alpha), multiplicity_.size());
        exponents_.insert(exponents_.end(), alpha.begin(), alpha.end());
        indices_.insert(indices_.end(), tuple.begin(), tuple.end());
        multiplicity_.push_back(n_fact / denom);
    };
    if (count_ == 0)
        return;
    if (degree == 0) {
        emit();
        return;
    }
    // Odometer over nondecreasing tuples.
    while (true) {
        emit();
        int pos = degree - 1;
        while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == dim - 1)
            --pos;
        if (pos < 0)
            break;
        const int v = tuple[static_cast<std::size_t>(pos)] + 1;
        for (int p = pos; p < degree; ++p)
            tuple[static_cast<std::size_t>(p)] = v;
    }
}

std::uint64_t MultisetIndex::key(std::span<const int> exponents) const
{
    std::uint64_t k = 0;
    const auto base = static_cast<std::uint64_t>(degree_ + 1);
    for (int e : exponents)
        k = k * base + static_cast<std::uint64_t>(e);
    return k;
}

std::span<const int> MultisetIndex::exponents(std::size_t rank) const
{
    return {exponents_.data() + rank * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::span<const int> MultisetIndex::indices(std::size_t rank) const
{
    return {indices_.data() + rank * static_cast<std::size_t>(degree_), static_cast<std::size_t>(degree_)};
}

std::size_t MultisetIndex::rank(std::span<const int> exponents) const
{
    if (exponents.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("MultisetIndex::rank: wrong exponent length");
    const auto it = lookup_.find(key(exponents));
    if (it == lookup_.end())
        throw std::invalid_argument("MultisetIndex::rank: exponents do not sum to degree");
    return it->second;
}

std::size_t MultisetIndex::rank_of_indices(std::span<const int> indices) const
{
    std::vector<int> alpha(static_cast<std::size_t>(dim_), 0);
    for (int i : indices) {
        if (i < 0 || i >= dim_)
            throw std::out_of_range("MultisetIndex: index out of range");
        ++alpha[static_cast<std::size_t>(i)];
    }
    return rank(alpha);
}

std::size_t MultisetIndex::raised(std::size_t rank, int j) const
{
    std::call_once(raise_once_, [this] {
        const MultisetIndex& next = multiset_index(dim_, degree_ + 1);
        raise_.resize(count_ * static_cast<std::size_t>(dim_));
        std::vector<int> alpha(static_cast<std::size_t>(dim_));
        for (std::size_t r = 0; r < count_; ++r) {
            const auto e = exponents(r);
            for (int jj = 0; jj < dim_; ++jj) {
                std::copy(e.begin(), e.end(), alpha.begin());
                ++alpha[static_cast<std::size_t>(jj)];
                raise_[r * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(jj)] = next.rank(alpha);
            }
        }
    });
    return raise_[rank * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j)];
}

const MultisetIndex& multiset_index(int dim, int degree)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<MultisetIndex>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, degree}];
    if (!slot)
        slot = std::make_unique<MultisetIndex>(dim, degree);
    return *slot;
}

} // namespace skewq
