#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace skewq {

using Rng = std::mt19937_64;

/// Seed of worker stream `stream` under master seed `master`:
/// splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15). Counter-based, so
/// the streams of a run depend only on (master, worker count).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

Rng make_stream(std::uint64_t master, std::uint64_t stream);

/// Splits [0, count) into `workers` contiguous chunks and runs
/// fn(rng_k, begin_k, end_k) for each, chunk k on its own thread with the
/// stream derive_seed(master, k). workers == 0 is treated as 1.
void parallel_chunks(std::size_t count, unsigned workers, std::uint64_t master,
                     const std::function<void(Rng&, std::size_t, std::size_t)>& fn);

} // namespace skewq
