#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rfisst {

/// Derives an independent generator from a master seed and a tag path, e.g.
/// substream(seed, {kTruth, scan}) or substream(seed, {kParent, scan, parent_id}).
/// Streams are stable across runs and independent of thread scheduling, which
/// is what makes multi-threaded scans reproducible.
enum class Stream : std::uint64_t {
    kTruth = 1,
    kObserve = 2,
    kParent = 3,
    kInit = 4,
    kBench = 5,
    kBirthState = 6,
};

namespace detail {
// splitmix64; the usual seed-scrambling step.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

inline std::mt19937_64 substream(std::uint64_t master_seed, Stream stream,
                                 std::initializer_list<std::uint64_t> tags = {}) {
    std::uint64_t h = detail::mix64(master_seed);
    h = detail::mix64(h ^ static_cast<std::uint64_t>(stream));
    for (std::uint64_t t : tags) h = detail::mix64(h ^ t);
    return std::mt19937_64(h);
}

}  // namespace rfisst
