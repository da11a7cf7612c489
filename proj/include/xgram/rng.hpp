#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace xgram {

/// Independent random streams drawn for one replicate.
enum class StreamPurpose : std::uint32_t {
    Noise = 1,          // model innovations Z_t
    Volatility = 2,     // stochastic-volatility shocks
    BootstrapIndex = 3, // stationary-bootstrap block starts and lengths
    LimitProcess = 4,   // Gaussian coefficients of limit-process series
    ChiSquareSeries = 5,
    NullModel = 6,      // null-model replicates for critical values
};

/// Identifies one stream: every (seed, replicate, purpose) triple maps to a
/// disjoint region of the Philox counter space.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint32_t replicate = 0;
    StreamPurpose purpose = StreamPurpose::Noise;
};

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * The key holds the user seed; the upper 64 bits of the counter hold the
 * replicate index and the stream purpose, the lower 64 bits count blocks.
 * Streams are therefore disjoint by construction, and any replicate can be
 * regenerated without touching the others.
 *
 * Satisfies UniformRandomBitGenerator with 64-bit output.
 */
class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(StreamKey key);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (next_ > 2) {
            refill();
        }
        const result_type value = (static_cast<result_type>(buffer_[next_]) << 32) | buffer_[next_ + 1];
        next_ += 2;
        return value;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Raw bijection, exposed for known-answer tests.
    static Block bijection(Block counter, Key key);

private:
    void refill();

    Key key_{};
    Block counter_{};
    Block buffer_{};
    int next_ = 4;
};

/// Seed of an independent family of streams (SplitMix64 finalizer over the
/// seed and a family tag). Used where one user seed drives several
/// Monte Carlo stages that each index their own replicates from 0.
std::uint64_t derive_seed(std::uint64_t seed, StreamPurpose family);

/// Philox engine bundled with the distributions the library draws from.
/// One instance per stream; not shared across threads.
class RandomStream {
public:
    explicit RandomStream(StreamKey key) : engine_(key) {}

    double uniform() { return engine_.uniform(); }
    double normal() { return normal_(engine_); }

    /// Student-t via the normal / chi-square ratio.
    double student_t(double df) {
        std::chi_squared_distribution<double> chi2(df);
        const double z = normal_(engine_);
        return z / std::sqrt(chi2(engine_) / df);
    }

    /// Uniform on {0, ..., n-1}.
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    /// Geometric on {1, 2, ...} with P(L = i) = theta (1 - theta)^(i-1).
    std::size_t geometric(double theta) {
        return static_cast<std::size_t>(std::geometric_distribution<long long>(theta)(engine_)) + 1;
    }

    Philox4x32& engine() { return engine_; }

private:
    Philox4x32 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};  // ziggurat
};

}  // namespace xgram
