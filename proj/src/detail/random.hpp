// SPDX-License-Identifier: Apache-2.0
//
// wavekit - wavenumber-domain MIMO precoding and capacity simulation
// Copyright (C) 2026 The wavekit authors
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

#ifndef WAVEKIT_DETAIL_RANDOM_H
#define WAVEKIT_DETAIL_RANDOM_H

#include <cmath>
#include <cstdint>
#include <random>

namespace wavekit::detail
{
    // Uniform in [0, 1) from the top 53 bits; independent of the standard library's distribution code
    inline double uniform01(std::mt19937_64 &rng)
    {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    inline double uniform(std::mt19937_64 &rng, double lo, double hi)
    {
        return lo + (hi - lo) * uniform01(rng);
    }

    // splitmix64 finalizer; derives independent stream seeds from (base, tag) pairs
    inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag)
    {
        std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Standard exponential variate
    inline double exponential(std::mt19937_64 &rng)
    {
        return -std::log1p(-uniform01(rng));
    }
}

#endif
