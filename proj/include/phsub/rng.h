#ifndef PHSUB_RNG_H
#define PHSUB_RNG_H

#include <cmath>
#include <cstdint>
#include <limits>

namespace phsub {

/// SplitMix64 (Steele, Lea & Flood 2014). Used for seeding and stream derivation.
class SplitMix64 {
   public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {
    }
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

   private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna). Output is fully specified, so seeded runs are
/// bit-identical across platforms and standard libraries.
class Xoshiro256 {
   public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto &word : s_) {
            word = sm.next();
        }
    }

    /// Independent stream for partition `index` of a run seeded with `seed`.
    static Xoshiro256 for_stream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mix(seed ^ SplitMix64(index + 0x632BE59BD9B4E019ULL).next());
        return Xoshiro256(mix.next());
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open0() {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

   private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace phsub

#endif
