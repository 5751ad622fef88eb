// Copyright 2026 The rmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmkit/random.hpp"

namespace rmkit {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngSeed RngSeed::substream(std::uint64_t index) const {
    return RngSeed{seed, splitmix64(stream_id ^ splitmix64(index + 0x632be59bd9b4e019ULL))};
}

Rng::Rng(RngSeed seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed.seed), static_cast<std::uint32_t>(seed.seed >> 32),
                      static_cast<std::uint32_t>(seed.stream_id), static_cast<std::uint32_t>(seed.stream_id >> 32)};
    engine_.seed(seq);
}

}  // namespace rmkit
