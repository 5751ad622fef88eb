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

#include "rmkit/core.hpp"

namespace rmkit::detail {

/// Left-multiplies every column of m (2^N rows) by the gate embedded at its sites.
void apply_gate_to_columns(Eigen::Ref<MatrixXc> m, int n_qubits, const Gate &gate);

/// Applies every gate of a setting (site rotations for product settings) in order.
void apply_setting_to_columns(Eigen::Ref<MatrixXc> m, const MeasurementSetting &setting);

}  // namespace rmkit::detail
