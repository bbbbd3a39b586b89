/*
   Copyright 2026 The stochconv Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace stochconv {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Stateless: the output is a pure function of (counter, key).
struct Philox4x32 {
    using ctr_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static ctr_type generate(ctr_type c, key_type k) {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
            const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
            c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
                 std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
        }
        return c;
    }
};

/// splitmix64 finalizer, used to derive independent sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t label) {
    return splitmix64(master ^ splitmix64(label + 0x632BE59BD9B4E019ull));
}

/// Stream tags keep the draws of different consumers disjoint.
enum class StreamTag : std::uint32_t { Wiener = 1, ExactOU = 2, GammaMC = 3, Probe = 4 };

/// Gaussian numbers addressed by (seed, tag, path, step, index). Each
/// Philox block yields two 53-bit uniforms and hence two normals via
/// Box-Muller, so index pairs (2j, 2j+1) share one block.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, StreamTag tag, std::uint64_t path)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          path_lo_(std::uint32_t(path)),
          tag_(std::uint32_t(tag) | (std::uint32_t(path >> 32) << 8)) {}

    std::pair<double, double> pair(std::uint32_t pair_index, std::uint32_t step) const {
        const auto r = Philox4x32::generate({pair_index, step, path_lo_, tag_}, key_);
        const double u1 = to_unit((std::uint64_t(r[0]) << 32) | r[1]);
        const double u2 = to_unit((std::uint64_t(r[2]) << 32) | r[3]);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925 * u2;
        return {rad * std::cos(th), rad * std::sin(th)};
    }

    /// Fills out[0..n) with the normals of one step.
    template <class Out>
    void fill(std::uint32_t step, Out& out, long n) const {
        for (long j = 0; j < n; j += 2) {
            auto z = pair(std::uint32_t(j / 2), step);
            out[j] = z.first;
            if (j + 1 < n) out[j + 1] = z.second;
        }
    }

    /// Uniform in (0,1) from the same addressing scheme.
    double uniform(std::uint32_t index, std::uint32_t step) const {
        const auto r = Philox4x32::generate({index, step, path_lo_, tag_ | 0x80000000u}, key_);
        return to_unit((std::uint64_t(r[0]) << 32) | r[1]);
    }

private:
    static double to_unit(std::uint64_t bits) {
        return (double(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t path_lo_;
    std::uint32_t tag_;
};

} // namespace stochconv
