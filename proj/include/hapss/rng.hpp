#pragma once

// Counter-based random streams (Philox4x32-10, Salmon et al., SC 2011).
//
// Every random quantity in the project is drawn from a RandomStream that is
// fully determined by (seed, stream id). Sub-streams are derived with
// derive_stream(parent, child), so a parallel run and a serial run that
// assign the same (seed, trial, purpose, cell) path to a draw produce
// bit-identical results regardless of scheduling.

#include <array>
#include <cmath>
#include <cstdint>

namespace hapss::rng {

/// SplitMix64 finalizer. Used only to spread stream ids, never as a generator.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Child stream id. The derivation tree is documented at each call site;
/// the root is the user-supplied master seed.
constexpr std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t child) noexcept {
    return mix64(parent ^ mix64(child));
}

/// Philox4x32-10 block generator. The 64-bit key is the master seed, the
/// high counter words carry the stream id, the low words count blocks.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(stream)),
          ctr3_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() noexcept {
        if (idx_ == 4) {
            generate();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

private:
    static void mul_hilo(std::uint32_t a, std::uint32_t b,
                         std::uint32_t& lo, std::uint32_t& hi) noexcept {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        lo = static_cast<std::uint32_t>(p);
        hi = static_cast<std::uint32_t>(p >> 32);
    }

    void generate() noexcept {
        std::uint32_t c0 = static_cast<std::uint32_t>(block_);
        std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
        std::uint32_t c2 = ctr2_, c3 = ctr3_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t lo0, hi0, lo1, hi1;
            mul_hilo(0xD2511F53u, c0, lo0, hi0);
            mul_hilo(0xCD9E8D57u, c2, lo1, hi1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_ = {c0, c1, c2, c3};
        ++block_;
    }

    std::uint32_t key0_, key1_, ctr2_, ctr3_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> out_{};
    int idx_ = 4;
};

/// Distribution layer over a Philox stream. All draws reduce to uniform01,
/// which fixes the consumption sequence and hence reproducibility.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : gen_(seed, stream) {}

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(gen_.next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Exponential with the given mean.
    double exponential(double mean) noexcept {
        return -mean * std::log1p(-uniform01());
    }

    /// Gamma(shape=m, mean=m) as a sum of m unit exponentials. Integer m only.
    double gamma_int_sum(int m) noexcept {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += exponential(1.0);
        return s;
    }

    /// Exact Poisson draw. Knuth's product method on mean chunks <= 256
    /// (superposition keeps the total exact while avoiding exp underflow).
    std::uint64_t poisson(double mean) noexcept {
        std::uint64_t total = 0;
        while (mean > 256.0) {
            total += poisson_knuth(256.0);
            mean -= 256.0;
        }
        return total + poisson_knuth(mean);
    }

private:
    std::uint64_t poisson_knuth(double mean) noexcept {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    Philox4x32 gen_;
};

}  // namespace hapss::rng
