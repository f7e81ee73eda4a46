#pragma once

#include <cstdint>
#include <random>

namespace acsidm {

/// Seeded pseudo-random stream.
///
/// Algorithm identity: std::mt19937_64 (fully specified by the standard, so
/// sequences are identical across platforms and standard libraries) seeded
/// with a single 64-bit value. Uniforms are built from the top 53 bits
/// directly rather than through std::uniform_real_distribution, whose output
/// is implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// True with probability p; p = 0 never fires and p = 1 always does.
    bool bernoulli(double p) { return uniform() < p; }

    /// Seed of sub-stream `index` of `seed` (SplitMix64 mixing). Streams keyed
    /// by index make results independent of iteration order.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace acsidm
