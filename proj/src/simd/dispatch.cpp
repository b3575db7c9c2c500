#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace skewq::simd {

namespace {

using detail::KernelTable;

bool cpu_has_avx2()
{
#if defined(SKEWQ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Isa isa)
{
#if defined(SKEWQ_HAVE_AVX2)
    if (isa == Isa::avx2)
        return &detail::avx2_kernels;
#endif
    (void)isa;
    return &detail::scalar_kernels;
}

Isa initial_isa()
{
    if (const char* env = std::getenv("SKEWQ_ISA"); env != nullptr && std::string(env) == "scalar")
        return Isa::scalar;
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

struct State {
    std::atomic<Isa> isa{initial_isa()};
};

State& state()
{
    static State s;
    return s;
}

const KernelTable& kernels()
{
    return *table_for(state().isa.load(std::memory_order_relaxed));
}

} // namespace

Isa active_isa()
{
    return state().isa.load(std::memory_order_relaxed);
}

bool isa_available(Isa isa)
{
    return isa == Isa::scalar || cpu_has_avx2();
}

void set_isa(Isa isa)
{
    if (!isa_available(isa))
        throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
    state().isa.store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa)
{
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

double dot(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("simd::dot: length mismatch");
    return kernels().dot(a.data(), b.data(), a.size());
}

void dot_rows(std::span<const double> rows, std::size_t dim, std::span<const double> theta,
              std::span<double> out)
{
    if (theta.size() != dim || rows.size() != out.size() * dim)
        throw std::invalid_argument("simd::dot_rows: shape mismatch");
    if (dim == 0) {
        for (double& o : out)
            o = 0.0;
        return;
    }
    kernels().dot_rows(rows.data(), out.size(), dim, theta.data(), out.data());
}

Moments moments(std::span<const double> values)
{
    return kernels().moments(values.data(), values.size());
}

void hermite(int n, std::span<const double> x, std::span<double> out)
{
    if (n < 0 || x.size() != out.size())
        throw std::invalid_argument("simd::hermite: bad arguments");
    kernels().hermite(n, x.data(), x.size(), out.data());
}

void charlier(int n, double a, std::span<const double> x, std::span<double> out)
{
    if (n < 0 || x.size() != out.size())
        throw std::invalid_argument("simd::charlier: bad arguments");
    kernels().charlier(n, a, x.data(), x.size(), out.data());
}

} // namespace skewq::simd
