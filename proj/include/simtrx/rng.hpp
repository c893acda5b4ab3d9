// simtrx - wave-domain MIMO transceiver simulator for stacked metasurfaces
// Copyright (C) 2026 simtrx project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace simtrx {

/// Counter-based PRNG (Philox4x32-10, Salmon et al. 2011).
///
/// Every (key, stream) pair addresses an independent sequence, so Monte-Carlo
/// tasks can derive their own stream from positional identifiers and produce
/// the same numbers regardless of execution order or thread count.  The word
/// layout is: counter = (c0,c1) = block index (low, high 32 bits),
/// (c2,c3) = stream id (low, high); key = (k0,k1) = key (low, high).
class Philox {
  public:
    explicit Philox(std::uint64_t key, std::uint64_t stream = 0)
        : key_(key), stream_(stream), block_(0), pos_(4), has_spare_(false), spare_(0.0)
    {
    }

    std::uint32_t next_u32()
    {
        if (pos_ == 4)
        {
            buf_ = block(key_, stream_, block_++);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    std::uint64_t next_u64()
    {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (fully specified, platform-independent).
    double gauss()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        // 1 - u in (0, 1] keeps the log argument positive
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> cgauss()
    {
        double re = gauss();
        double im = gauss();
        return {re * 0.70710678118654752440, im * 0.70710678118654752440};
    }

    /// One Philox4x32-10 block; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t stream,
                                              std::uint64_t index)
    {
        std::uint32_t c0 = std::uint32_t(index);
        std::uint32_t c1 = std::uint32_t(index >> 32);
        std::uint32_t c2 = std::uint32_t(stream);
        std::uint32_t c3 = std::uint32_t(stream >> 32);
        std::uint32_t k0 = std::uint32_t(key);
        std::uint32_t k1 = std::uint32_t(key >> 32);
        return rounds(c0, c1, c2, c3, k0, k1);
    }

    static std::array<std::uint32_t, 4> rounds(std::uint32_t c0, std::uint32_t c1,
                                               std::uint32_t c2, std::uint32_t c3,
                                               std::uint32_t k0, std::uint32_t k1)
    {
        for (int round = 0; round < 10; ++round)
        {
            std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c0;
            std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c2;
            std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
            std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return {c0, c1, c2, c3};
    }

  private:
    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t block_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_;
    bool has_spare_;
    double spare_;
};

/// SplitMix64 finalizer; the mixing step of the stream-derivation rule.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Stream-derivation rule: fold positional tags into a 64-bit stream id.
///
/// stream = splitmix64(... splitmix64(splitmix64(master ^ t0) ^ t1) ... ^ tn)
///
/// Cross-language reimplementations can reproduce streams from this rule plus
/// the Philox word layout above.
inline std::uint64_t derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t t : tags)
        s = splitmix64(s ^ t);
    return s;
}

} // namespace simtrx
