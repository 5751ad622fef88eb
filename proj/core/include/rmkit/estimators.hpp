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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rmkit/core.hpp"
#include "rmkit/shadows.hpp"
#include "rmkit/state.hpp"

namespace rmkit {

struct EstimateWithError {
    double value = 0.0;
    std::optional<double> sem;
    std::size_t n_samples = 0;
};

/// tr(O rho) for one snapshot; Pauli strings factorize into per-site traces.
double shadow_expectation(const PauliObservable &obs, const FactorizedShadow &shadow);
double shadow_expectation(const PauliObservable &obs, const MatrixXc &shadow);

/// Mean of tr(O rho) over the shadows. The SEM is taken over means of
/// consecutive blocks of block_size shadows; pass the shots per setting to
/// treat each setting as one independent sample.
EstimateWithError expect_shadow(const PauliObservable &obs, std::span<const FactorizedShadow> shadows,
                                bool compute_sem = false, int block_size = 1);
EstimateWithError expect_shadow(const PauliObservable &obs, std::span<const DenseShadow> shadows,
                                bool compute_sem = false, int block_size = 1);

/// Unbiased U-statistic estimates of tr(rho^k) over batch shadows; the SEM is
/// the jackknife standard error.
std::vector<EstimateWithError> trace_moments(const BatchShadowSet &batches, std::span<const int> orders,
                                             bool compute_sem = false);

/// Purity from raw bit strings via the Hamming kernel (-2)^(-D(s,s')), with
/// the same-shot terms removed. Mean over settings.
EstimateWithError purity_direct(const MeasurementGroup &group, bool compute_sem = false);

/// tr(rho1 rho2) from two groups measured with identical settings.
EstimateWithError overlap_direct(const MeasurementGroup &first, const MeasurementGroup &second,
                                 bool compute_sem = false);

/// tr(rho1 rho2) / max(tr rho1^2, tr rho2^2). The SEM uses first-order
/// propagation and ignores the overlap-purity covariance.
EstimateWithError cross_platform_fidelity(const MeasurementGroup &first, const MeasurementGroup &second,
                                          bool compute_sem = false);

/// 2^N E_data[p(s)] - 1 for computational-basis data. ideal must be a pure
/// dense state or an MPS.
double xeb(const QuantumState &ideal, const MeasurementData &data);

/// 2^N sum_s p(s)^2 - 1; the corrected fidelity is xeb / self_xeb.
double self_xeb(const QuantumState &ideal);

}  // namespace rmkit
