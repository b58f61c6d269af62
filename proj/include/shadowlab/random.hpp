#pragma once

#include <cstdint>
#include <random>

namespace shadowlab {

/// Seeded random stream. Stream `id` of master seed `seed` is an mt19937_64
/// initialized through std::seed_seq from the four 32-bit halves of (seed, id);
/// both the engine and seed_seq are fully specified by the standard, and the
/// real-valued draws below avoid the implementation-defined std distributions,
/// so sequences are bit-identical across platforms.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, n), unbiased by rejection.
    std::uint64_t below(std::uint64_t n);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

} // namespace shadowlab
