#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace xhawkes {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11), same round
/// constants and output order as NumPy's `Philox` bit generator. The key is
/// (seed, stream), so per-path streams are independent and a batch of paths
/// can be generated in any order.
class Philox4x64 {
  public:
    explicit Philox4x64(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{seed, stream}, counter_{0, 0, 0, 0} {}

    std::uint64_t next_u64() {
        if (idx_ == 4) {
            block_ = philox_block(counter_, key_);
            increment_counter();
            idx_ = 0;
        }
        return block_[idx_++];
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Exponential draw with the given rate (mean 1/rate).
    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

    /// Standard normal via Box-Muller (pairs cached).
    double standard_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Raw one-block evaluation, exposed for known-answer tests.
    static std::array<std::uint64_t, 4> philox_block(std::array<std::uint64_t, 4> ctr,
                                                     std::array<std::uint64_t, 2> key) {
        round_once(ctr, key);
        for (int r = 1; r < 10; ++r) {
            key[0] += 0x9E3779B97F4A7C15ULL;
            key[1] += 0xBB67AE8584CAA73BULL;
            round_once(ctr, key);
        }
        return ctr;
    }

  private:
    static void round_once(std::array<std::uint64_t, 4>& ctr,
                           const std::array<std::uint64_t, 2>& key) {
        const unsigned __int128 p0 =
            static_cast<unsigned __int128>(0xD2E7470EE14C6C93ULL) * ctr[0];
        const unsigned __int128 p1 =
            static_cast<unsigned __int128>(0xCA5A826395121157ULL) * ctr[2];
        const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
        const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
        const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
        const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    void increment_counter() {
        for (int i = 0; i < 4; ++i) {
            if (++counter_[i] != 0) break;
        }
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> block_{};
    int idx_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace xhawkes
