#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace xsc {

/// Seeded, splittable pseudo-random stream (xoshiro256** state expanded
/// from the 64-bit key with splitmix64).
///
/// Identical keys produce identical sequences on every platform; the raw
/// integer stream does not depend on libm or on the standard library's
/// distribution implementations. Substreams are pure functions of
/// (key, label): deriving the same label twice yields the same stream, so
/// parallel replications stay reproducible regardless of scheduling.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Independent stream derived from this stream's key and a label.
    /// Does not consume or depend on any draws made so far.
    RandomStream substream(std::uint64_t label) const;
    RandomStream substream(std::string_view label) const;

    std::uint64_t next_u64();

    /// Uniform draw strictly inside (0, 1); safe as input to log().
    double next_open01();

    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_;
};

} // namespace xsc
