#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ordwalk {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). A draw is
// a pure function of (seed, stream, counter), which is what makes ensemble
// results independent of thread count and replayable from a manifest.
namespace philox {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t counter) {
    constexpr std::uint32_t kWeylA = 0x9E3779B9u, kWeylB = 0xBB67AE85u;
    constexpr std::uint32_t kMulA = 0xD2511F53u, kMulB = 0xCD9E8D57u;
    std::uint32_t c[4] = {static_cast<std::uint32_t>(counter),
                          static_cast<std::uint32_t>(counter >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kMulA, c[0], lo0, hi0);
        mulhilo(kMulB, c[2], lo1, hi1);
        std::uint32_t n0 = hi1 ^ c[1] ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c[3] ^ k1;
        std::uint32_t n3 = lo0;
        c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
        k0 += kWeylA;
        k1 += kWeylB;
    }
    return {c[0], c[1], c[2], c[3]};
}

}  // namespace philox

// One logical stream: draws are indexed by an internal counter, so skipping
// a path early never desynchronizes other streams.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            auto b = philox::block(seed_, stream_, counter_++);
            buf_[0] = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
            buf_[1] = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
            have_ = 2;
        }
        return buf_[--have_];
    }

    // Uniform on (0, 1]: 53 random bits, never zero.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    std::uint64_t seed_, stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t buf_[2] = {0, 0};
    int have_ = 0;
};

}  // namespace ordwalk
