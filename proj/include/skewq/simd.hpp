#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2+FMA variant chosen at runtime from
// CPUID. Setting SKEWQ_ISA=scalar in the environment forces the reference path.
namespace skewq::simd {

enum class Isa { scalar, avx2 };

Isa active_isa();
bool isa_available(Isa isa);
/// Switches the process-wide kernel table. Throws std::invalid_argument if
/// the instruction set is not available on this machine.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b);

/// out[k] = <rows[k*dim .. k*dim+dim), theta> for a row-major block.
void dot_rows(std::span<const double> rows, std::size_t dim, std::span<const double> theta,
              std::span<double> out);

Moments moments(std::span<const double> values);

/// out[i] = He_n(x[i]) (probabilists' Hermite, three-term recurrence).
void hermite(int n, std::span<const double> x, std::span<double> out);

/// out[i] = C_n(x[i]; a), the Charlier polynomial orthogonal for Poisson(a):
/// C_{k+1}(x) = (x - k - a) C_k(x) - k a C_{k-1}(x).
void charlier(int n, double a, std::span<const double> x, std::span<double> out);

} // namespace skewq::simd
