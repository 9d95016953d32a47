#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace equidyn {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for sample `index` of stream `stream` under `master`.
///
/// Depends only on the triple, so results do not depend on which worker draws
/// which sample.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) noexcept
{
    return mix64(mix64(mix64(master) ^ stream) + index);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index)
{
    return Rng(derive_seed(master, stream, index));
}

/// Uniform double in [0, 1) with 53 random bits; bit-identical across platforms.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Worker count used by every parallel loop; 0 or unset means 1.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Run body(i) for i in [0, count) on worker_count() threads.
///
/// body must only write to storage owned by index i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace equidyn
