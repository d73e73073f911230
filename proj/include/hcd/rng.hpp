#ifndef HCD_RNG_HPP
#define HCD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace hcd {

// Deterministic counter-based generator (splitmix64 applied to a running
// counter).  The same seed yields the same stream on every platform, and
// independent substreams are derived by hashing a salt into the seed, which
// is what the recursive engine uses to give each branch its own stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Seed for a child stream, stable under evaluation order.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
        return mix(seed ^ (0x9e3779b97f4a7c15ULL + salt * 0xda942042e4dd58b5ULL));
    }

    std::uint64_t next() { return mix(counter_++ + state_); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bound > 0; rejection-free modulo is fine
    // for the bounds used here (bias < 2^-32 for bound < 2^32).
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    double normal() {
        // Marsaglia polar method, deterministic given the stream position.
        for (;;) {
            double u = 2.0 * uniform() - 1.0;
            double v = 2.0 * uniform() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                double f = std::sqrt(-2.0 * std::log(s) / s);
                return u * f;
            }
        }
    }

private:
    std::uint64_t state_;
    std::uint64_t counter_ = 0;
};

}  // namespace hcd

#endif
