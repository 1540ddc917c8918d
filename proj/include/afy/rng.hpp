#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace afy {

// Deterministic counter-based generator: the n-th output is a SplitMix64
// finalizer applied to key + n * golden.  Substreams derived with split()
// are independent of how many values the parent has produced, so batched
// runs can be merged in stream order and stay bit-for-bit reproducible.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream * 0x9E3779B97F4A7C15ull))) {}

    std::uint64_t next_u64() {
        ctr_ += 0x9E3779B97F4A7C15ull;
        return mix(key_ + ctr_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Uniform non-negative integer with the given number of bits.
    mpz_class next_mpz(unsigned bits) {
        mpz_class v = 0;
        for (unsigned got = 0; got < bits; got += 64) {
            v <<= 64;
            mpz_class word(static_cast<unsigned long>(next_u64() >> 32));
            word <<= 32;
            word |= static_cast<unsigned long>(next_u64() & 0xFFFFFFFFull);
            v |= word;
        }
        if (bits % 64 != 0) v >>= (64 - bits % 64);
        return v;
    }

    // Derive an independent generator; does not disturb this one.
    SplitRng split(std::uint64_t stream) const {
        SplitRng child(0);
        child.key_ = mix(key_ ^ mix(stream + 0xD1B54A32D192ED03ull));
        child.ctr_ = 0;
        return child;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace afy
