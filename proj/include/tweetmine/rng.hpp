#pragma once

// Deterministic random primitives.  std::mt19937_64 has a pinned algorithm,
// but the std distributions do not, so uniform/gaussian draws are generated
// here by hand to keep outputs byte-identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

namespace tweetmine {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0,1) with 53 random bits
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0,n), n > 0; rejection-free modulo is fine here
    // because n is tiny relative to 2^64 (bias < n/2^64)
    std::uint64_t uniform_index(std::uint64_t n) { return engine_() % n; }

    // standard normal via Box-Muller; one value per call, cached partner
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tweetmine
