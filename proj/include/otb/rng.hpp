#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace otb {

// Deterministic, platform-independent pseudo-random stream.
//
// std::mt19937_64 generates the same bit stream everywhere, but the standard
// distributions are implementation-defined, so the transformations below are
// spelled out by hand. Replicate b of a bootstrap run draws from
// Rng::stream(seed, b), which makes every draw independent of execution order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix(seed ^ 0x9E3779B97F4A7C15ull)) {
        // burn-in so that nearby seeds decorrelate
        for (int i = 0; i < 8; ++i) next_u64();
    }

    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(splitmix(seed + 0x632BE59BD9B4E019ull * (index + 1)));
    }

    std::uint64_t next_u64() {
        // xorshift64* core
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1Dull;
    }

    // uniform on [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), unbiased by rejection
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // standard exponential, mean 1
    double next_exponential() {
        double u;
        do {
            u = next_double();
        } while (u <= 0.0);
        return -std::log(u);
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
};

}  // namespace otb
