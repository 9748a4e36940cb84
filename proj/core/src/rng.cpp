// rng.cpp: splitmix64 counters feeding Box-Muller

#include "slnoise/rng.hpp"

#include <cmath>
#include <numbers>

namespace sln {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Uniform on (0, 1], never zero so the log is finite.
double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

} // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

std::uint64_t seed_for(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + kGolden));
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t channel)
    : key_(mix64(seed ^ mix64(channel * 0xD1B54A32D192ED03ull + 1))) {}

double NormalStream::at(std::uint64_t i) const {
    const std::uint64_t pair = i >> 1;
    const std::uint64_t base = key_ + 2 * pair * kGolden;
    const double u1 = to_unit(mix64(base + kGolden));
    const double u2 = to_unit(mix64(base + 2 * kGolden));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return (i & 1) ? r * std::sin(phi) : r * std::cos(phi);
}

void NormalStream::fill(std::vector<double>& out, double sigma) const {
    const std::size_t n = out.size();
    for (std::size_t p = 0; 2 * p < n; ++p) {
        const std::uint64_t base = key_ + 2 * p * kGolden;
        const double u1 = to_unit(mix64(base + kGolden));
        const double u2 = to_unit(mix64(base + 2 * kGolden));
        const double r = sigma * std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        out[2 * p] = r * std::cos(phi);
        if (2 * p + 1 < n) out[2 * p + 1] = r * std::sin(phi);
    }
}

} // namespace sln
