#pragma once

#include <cstdint>
#include <initializer_list>

namespace ampcdf {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds each word into the state: h <- splitmix64(h ^ word), starting from
/// h = splitmix64(base). Stable across platforms and releases.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = splitmix64(base);
    for (auto w : words) {
        h = splitmix64(h ^ w);
    }
    return h;
}

constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t word) noexcept {
    return mix_seed(base, {word});
}

} // namespace ampcdf
