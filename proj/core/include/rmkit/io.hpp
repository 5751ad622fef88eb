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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmkit/core.hpp"
#include "rmkit/shallow.hpp"

namespace rmkit::io {

// Every file is a UTF-8 JSON manifest next to a raw binary payload. The
// manifest names the payload (relative to its own directory) and lists the
// byte offset and length of each section. Complex numbers are little-endian
// IEEE-754 double pairs (re, im), matrices row-major; outcome bits take one
// byte each.

inline constexpr int kFormatVersion = 1;

void write_settings(const std::filesystem::path &manifest, std::span<const MeasurementSetting> settings);
std::vector<MeasurementSetting> read_settings(const std::filesystem::path &manifest);

void write_group(const std::filesystem::path &manifest, const MeasurementGroup &group);
MeasurementGroup read_group(const std::filesystem::path &manifest);

void write_channel(const std::filesystem::path &manifest, const DenseChannel &channel);
DenseChannel read_channel(const std::filesystem::path &manifest);

struct ResultRow {
    std::string name;
    double value = 0.0;
    /// One standard error; absent when not requested.
    std::optional<double> sigma;
    int n_settings = 0;
    int n_shots = 0;
    int n_batches = 0;

    friend bool operator==(const ResultRow &, const ResultRow &) = default;
};

/// Names and counts go to the manifest; (value, sigma) pairs to the payload,
/// with NaN standing for a missing sigma.
void write_results(const std::filesystem::path &manifest, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results(const std::filesystem::path &manifest);

/// Payload path derived from a manifest path (extension replaced by .bin).
std::filesystem::path payload_path_for(const std::filesystem::path &manifest);

}  // namespace rmkit::io
