#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "skewq/measures.hpp"
#include "skewq/rng.hpp"

namespace skewq {

/// Finite counting measure supported on the atoms of a reference Levy
/// measure: eta = sum_j n_j delta_{y_j}. Immutable; add() returns a copy.
class PointConfiguration {
public:
    explicit PointConfiguration(std::shared_ptr<const AtomicLevyMeasure> levy);
    PointConfiguration(std::shared_ptr<const AtomicLevyMeasure> levy, std::vector<int> counts);

    const AtomicLevyMeasure& levy() const noexcept { return *levy_; }
    const std::shared_ptr<const AtomicLevyMeasure>& levy_ptr() const noexcept { return levy_; }
    std::size_t size() const noexcept { return counts_.size(); }
    int count(std::size_t atom) const { return counts_[atom]; }
    std::span<const int> counts() const noexcept { return counts_; }
    int total() const;
    /// eta(B) for B given as a set of atom indices.
    int mass(std::span<const std::size_t> atoms) const;
    /// eta + times * delta_{y_atom}.
    PointConfiguration add(std::size_t atom, int times = 1) const;

private:
    std::shared_ptr<const AtomicLevyMeasure> levy_;
    std::vector<int> counts_;
};

/// Independent Poisson(w_j) multiplicities at each atom.
PointConfiguration sample_point_configuration(const std::shared_ptr<const AtomicLevyMeasure>& levy, Rng& rng);

/// Truncated count grid of a Poisson random measure on finitely many atoms:
/// per-atom probabilities cut where the tail mass drops below `tail`.
class CountGrid {
public:
    explicit CountGrid(const AtomicLevyMeasure& levy, double tail = 1e-14);
    explicit CountGrid(std::vector<double> weights, double tail = 1e-14);

    std::size_t atoms() const noexcept { return pmf_.size(); }
    /// Number of count vectors in the grid (saturating at SIZE_MAX).
    std::size_t size() const noexcept { return size_; }
    const std::vector<double>& pmf(std::size_t atom) const { return pmf_[atom]; }

    /// Calls fn(counts, probability) for every count vector of the grid.
    void for_each(const std::function<void(std::span<const int>, double)>& fn) const;

private:
    std::vector<std::vector<double>> pmf_;
    std::size_t size_ = 1;
};

/// Largest grid enumerated exactly before a caller has to fall back.
inline constexpr std::size_t kMaxEnumeration = 20'000'000;

} // namespace skewq
