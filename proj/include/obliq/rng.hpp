#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Reproducible random streams. One xoshiro256++ generator per stream, with
// the state seeded through splitmix64 from a (seed, stream) pair, so stream k
// of a run is a pure function of those two integers: replications can execute
// in any order, on any number of threads, and reproduce bit-identically.
//
// Sampling is by fixed, portable recipes (inverse CDF for the exponential,
// Marsaglia's polar method for the normal) rather than <random> distributions,
// whose output is implementation-defined.

namespace obliq {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        // Decorrelate streams before expanding: the avalanche of the mixed
        // pair seeds the splitmix sequence that fills the xoshiro state.
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 0x632BE59BD9B4E019ULL));
        for (auto& word : state_) {
            word = detail::splitmix64_next(sm);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0ULL) {
            state_[0] = 1ULL;  // all-zero state is the one forbidden xoshiro state
        }
    }

    // xoshiro256++ step.
    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Exponential with the given mean, by inverse CDF: -mean * ln(1 - u).
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    /// Standard normal by the polar method; the spare deviate of each
    /// accepted pair is cached for the next call.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, r2;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            r2 = u * u + v * v;
        } while (r2 >= 1.0 || r2 == 0.0);
        const double f = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace obliq
