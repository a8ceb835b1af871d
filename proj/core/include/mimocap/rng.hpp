#pragma once

#include <cmath>
#include <cstdint>

namespace mimocap {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based random stream: the state is derived from (seed, counter)
/// alone, so shards addressed by sample index reproduce the same draws no
/// matter how work is divided between workers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter) {
        state_ = seed ^ 0xD1B54A32D192ED03ULL;
        (void)detail::splitmix64(state_);
        state_ ^= (counter + 1) * 0x9E3779B97F4A7C15ULL;
        (void)detail::splitmix64(state_);
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    /// Uniform draw in (0, 1]; never exactly 0 so log() is safe.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Box-Muller pair of independent standard normals.
    void next_normal_pair(double& z0, double& z1) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }

private:
    std::uint64_t state_;
};

}  // namespace mimocap
