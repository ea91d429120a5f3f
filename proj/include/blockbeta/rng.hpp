#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace blockbeta {

/// Counter-based random stream (Philox4x32-10). The key is derived from the
/// root seed, the upper half of the counter holds the stream index, so
/// (root_seed, stream_index) pairs give independent reproducible sequences
/// without any shared state.
///
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t root_seed, std::uint64_t stream_index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t root_seed() const { return root_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    /// A new stream with the same root seed.
    RngStream substream(std::uint64_t index) const { return {root_seed_, index}; }

private:
    void refill();

    std::uint64_t root_seed_;
    std::uint64_t stream_index_;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t block_counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

}  // namespace blockbeta
