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

#pragma once

#include <cstdint>
#include <random>

namespace rmkit {

/// Identifies one reproducible random stream.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Independent child stream; used to give every setting its own stream.
    RngSeed substream(std::uint64_t index) const;

    friend bool operator==(const RngSeed &, const RngSeed &) = default;
};

class Rng {
  public:
    explicit Rng(RngSeed seed);

    /// Uniform on [0, 1).
    double uniform() { return uniform_(engine_); }
    /// Standard normal.
    double normal() { return normal_(engine_); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

    std::mt19937_64 &engine() noexcept { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rmkit
