// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams. Each Monte Carlo sample owns the stream
// (seed, sample index), so results never depend on how samples are split
// across worker threads.
//
// Philox4x32-10: Salmon, Moraes, Dror, Shaw, "Parallel random numbers: as
// easy as 1, 2, 3", SC 2011.

#ifndef LGAS_RNG_HPP
#define LGAS_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace lgas::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr Counter philox4x32_10(Counter ctr, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// Uniform random bit generator over one (seed, stream) pair. Satisfies
/// std::uniform_random_bit_generator, so it plugs into <random> distributions.
class Stream {
public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_hi_{static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (used_ == 2) refill();
        const std::size_t i = 2 * used_++;
        return (static_cast<std::uint64_t>(block_[i]) << 32) | block_[i + 1];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t blocks_used() const { return block_index_; }

private:
    void refill() {
        block_ = philox4x32_10({static_cast<std::uint32_t>(block_index_),
                                static_cast<std::uint32_t>(block_index_ >> 32), stream_hi_[0], stream_hi_[1]},
                               key_);
        ++block_index_;
        used_ = 0;
    }

    Key key_;
    std::array<std::uint32_t, 2> stream_hi_;
    Counter block_{};
    std::uint64_t block_index_ = 0;
    std::size_t used_ = 2;
};

}  // namespace lgas::rng

#endif  // LGAS_RNG_HPP
