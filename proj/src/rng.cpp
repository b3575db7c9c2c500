#include "skewq/rng.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace skewq {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

Rng make_stream(std::uint64_t master, std::uint64_t stream)
{
    return Rng(derive_seed(master, stream));
}

void parallel_chunks(std::size_t count, unsigned workers, std::uint64_t master,
                     const std::function<void(Rng&, std::size_t, std::size_t)>& fn)
{
    workers = std::max(1u, workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    if (workers == 1) {
        Rng rng = make_stream(master, 0);
        fn(rng, 0, count);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned k = 0; k < workers; ++k) {
        const std::size_t begin = std::min(count, k * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        threads.emplace_back([&, k, begin, end] {
            try {
                Rng rng = make_stream(master, k);
                fn(rng, begin, end);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace skewq
