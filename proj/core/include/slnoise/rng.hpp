// rng.hpp: Counter-based Gaussian streams
//
// Every draw is a pure function of (stream seed, channel, index), so the
// same realization comes out identical whatever thread produces it.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sln {

// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Stream seed for realization `index` under `master`. Injective in index for fixed master.
std::uint64_t seed_for(std::uint64_t master, std::uint64_t index);

class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t channel);

    // Standard normal variate number i of this stream.
    double at(std::uint64_t i) const;

    // out[i] = sigma * at(i) for i in [0, out.size()).
    void fill(std::vector<double>& out, double sigma) const;

private:
    std::uint64_t key_;
};

} // namespace sln
