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

#include <optional>
#include <span>

#include "rmkit/core.hpp"
#include "rmkit/random.hpp"
#include "rmkit/state.hpp"

namespace rmkit {

struct MeasurementProbability {
    Eigen::VectorXd probabilities;
    MeasurementSetting setting;
};

/// Rotations: U|psi>, U rho U^dagger, or the MPS with each site tensor rotated.
/// MPS inputs only accept product-form settings.
PureStateDense apply_setting(const PureStateDense &psi, const MeasurementSetting &setting);
DensityMatrixDense apply_setting(const DensityMatrixDense &rho, const MeasurementSetting &setting);
MatrixProductState apply_setting(const MatrixProductState &mps, const MeasurementSetting &setting);
PureStateDense apply_setting_adjoint(const PureStateDense &psi, const MeasurementSetting &setting);

/// Exact local depolarizing channel (1 - 3p/4) rho + p/4 (X rho X + Y rho Y + Z rho Z) on each qubit.
DensityMatrixDense apply_noise(const DensityMatrixDense &rho, const NoiseModel &noise);

/// Outcome distribution of a setting, indexed with site 1 most significant.
MeasurementProbability born_probabilities(const QuantumState &state, const MeasurementSetting &setting);

/// n_shots i.i.d. bit strings. Pure-state backends model noise by inserting a
/// uniformly random Pauli with probability 3p_i/4 on each site right before
/// the measurement; the density-matrix backend applies the channel exactly.
/// MPS inputs are sampled site by site without forming 2^N vectors.
MeasurementData sample_measurements(const QuantumState &state, const MeasurementSetting &setting, int n_shots,
                                    const std::optional<NoiseModel> &noise, Rng &rng);

/// One MeasurementData per setting; setting j uses seed.substream(j).
MeasurementGroup simulate_group(const QuantumState &state, std::span<const MeasurementSetting> settings, int n_shots,
                                const std::optional<NoiseModel> &noise, RngSeed seed);

double pauli_expectation(const QuantumState &state, const PauliObservable &obs);

}  // namespace rmkit
