// SPDX-License-Identifier: Apache-2.0
//
// lensmimo: link-level simulator for wideband mmWave MIMO with lens antenna
// arrays, plus fully digital and hybrid UPA benchmarks.
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

#ifndef LENSMIMO_RNG_H
#define LENSMIMO_RNG_H

#include <cstdint>
#include <random>

namespace lensmimo
{

// splitmix64 finalizer, used to decorrelate stream seeds derived from a
// single master seed. Constants from Steele, Lea and Doug's reference code.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for an independent sub-stream (e.g. one Monte Carlo trial). Trials
// keyed this way can run in any order, or in parallel, and still reproduce.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_index)
{
    return splitmix64(splitmix64(master_seed) ^ (0x9E3779B97F4A7C15ull * (stream_index + 1)));
}

// Deterministic random stream. Thin wrapper around std::mt19937_64 with an
// explicit uniform mapping, so the produced doubles are identical across
// platforms (std::uniform_real_distribution is not guaranteed to be).
class RngStream
{
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Uniform on (0, 1], for quantities that must stay strictly positive.
    double uniform_pos()
    {
        return 1.0 - uniform();
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace lensmimo

#endif
