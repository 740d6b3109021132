#pragma once

#include <cstdint>
#include <random>

namespace dfsnet {

// splitmix64 finalizer; used to derive independent, reproducible seed streams.
inline uint64_t mix_seed(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic sub-stream seed for (base, stream, index).  Trials, noise
// realizations and protocol sampling each get their own stream id so that
// adding draws to one never perturbs another.
inline uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index = 0) {
    return mix_seed(mix_seed(base ^ 0x6a09e667f3bcc909ULL) ^ mix_seed(stream) ^ mix_seed(index + 1));
}

using Rng = std::mt19937_64;

}  // namespace dfsnet
