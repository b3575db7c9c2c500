#include "skewq/point_configuration.hpp"

#include <limits>
#include <numeric>
#include <random>

#include "skewq/error.hpp"
#include "skewq/quadrature.hpp"

namespace skewq {

PointConfiguration::PointConfiguration(std::shared_ptr<const AtomicLevyMeasure> levy)
    : levy_(std::move(levy))
{
    if (!levy_)
        throw ValidationError("PointConfiguration: missing Levy measure");
    counts_.assign(levy_->size(), 0);
}

PointConfiguration::PointConfiguration(std::shared_ptr<const AtomicLevyMeasure> levy, std::vector<int> counts)
    : levy_(std::move(levy)), counts_(std::move(counts))
{
    if (!levy_)
        throw ValidationError("PointConfiguration: missing Levy measure");
    if (counts_.size() != levy_->size())
        throw AtomSetMismatch("PointConfiguration: one multiplicity per atom required");
    for (int c : counts_)
        if (c < 0)
            throw ValidationError("PointConfiguration: negative multiplicity");
}

int PointConfiguration::total() const
{
    return std::accumulate(counts_.begin(), counts_.end(), 0);
}

int PointConfiguration::mass(std::span<const std::size_t> atoms) const
{
    int m = 0;
    for (std::size_t j : atoms)
        m += counts_.at(j);
    return m;
}

PointConfiguration PointConfiguration::add(std::size_t atom, int times) const
{
    if (atom >= counts_.size())
        throw AtomSetMismatch("PointConfiguration::add: atom index out of range");
    std::vector<int> next = counts_;
    next[atom] += times;
    return PointConfiguration(levy_, std::move(next));
}

PointConfiguration sample_point_configuration(const std::shared_ptr<const AtomicLevyMeasure>& levy, Rng& rng)
{
    std::vector<int> counts(levy->size());
    for (std::size_t j = 0; j < counts.size(); ++j)
        counts[j] = std::poisson_distribution<int>(levy->weight(j))(rng);
    return PointConfiguration(levy, std::move(counts));
}

CountGrid::CountGrid(const AtomicLevyMeasure& levy, double tail) : CountGrid(levy.weights(), tail) {}

CountGrid::CountGrid(std::vector<double> weights, double tail)
{
    for (double w : weights) {
        pmf_.push_back(poisson_pmf_truncated(w, tail));
        const std::size_t k = pmf_.back().size();
        if (size_ > std::numeric_limits<std::size_t>::max() / k)
            size_ = std::numeric_limits<std::size_t>::max();
        else
            size_ *= k;
    }
}

void CountGrid::for_each(const std::function<void(std::span<const int>, double)>& fn) const
{
    const std::size_t m = pmf_.size();
    std::vector<int> counts(m, 0);
    // prob[j] = product of the pmf factors of atoms 0..j-1
    std::vector<double> prob(m + 1, 1.0);
    for (std::size_t j = 0; j < m; ++j)
        prob[j + 1] = prob[j] * pmf_[j][0];
    while (true) {
        fn(counts, prob[m]);
        std::size_t j = m;
        while (j > 0) {
            --j;
            if (static_cast<std::size_t>(counts[j] + 1) < pmf_[j].size()) {
                ++counts[j];
                prob[j + 1] = prob[j] * pmf_[j][static_cast<std::size_t>(counts[j])];
                for (std::size_t i = j + 1; i < m; ++i) {
                    counts[i] = 0;
                    prob[i + 1] = prob[i] * pmf_[i][0];
                }
                break;
            }
            if (j == 0)
                return;
        }
        if (m == 0)
            return;
    }
}

} // namespace skewq
