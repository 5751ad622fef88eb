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

#include <string_view>
#include <vector>

#include "rmkit/core.hpp"
#include "rmkit/random.hpp"
#include "rmkit/shadows.hpp"

namespace rmkit {

/// Superoperators act on column-major vectorized operators: vec(X)[i + d j] = X(i, j).
inline constexpr int kMaxChannelQubits = 6;

enum class ChannelEnsemble {
    /// Independent Haar U(2) rotation per site.
    LocalHaar,
    /// Brickwork circuits from shallow_setting.
    Shallow,
};

std::string_view to_string(ChannelEnsemble kind);
ChannelEnsemble parse_channel_ensemble(std::string_view name);

/// Identifies the circuit ensemble a channel belongs to. Deliberately holds no
/// training circuits.
struct EnsembleSpec {
    ChannelEnsemble kind = ChannelEnsemble::Shallow;
    int n_qubits = 1;
    int depth = 0;

    friend bool operator==(const EnsembleSpec &, const EnsembleSpec &) = default;
};

/// True when the ensemble is invariant under Pauli strings applied before the
/// circuit (every qubit meets a Haar gate first), which makes the channel
/// diagonal in the Pauli basis: local Haar for any N, brickwork for depth >= 1
/// with N even, depth >= 2 with N odd.
bool pauli_invariant(const EnsembleSpec &ensemble);

enum class ChannelEstimator {
    /// PauliTwirled for Pauli-invariant ensembles, Direct otherwise.
    Automatic,
    /// Average of the full per-circuit superoperators.
    Direct,
    /// Average of the per-circuit Pauli eigenvalues <<Q|M_U|Q>>/d, the rest of
    /// the superoperator being zero by symmetry. Same expectation as Direct,
    /// far smaller Monte-Carlo error.
    PauliTwirled,
};

std::string_view to_string(ChannelEstimator estimator);
ChannelEstimator parse_channel_estimator(std::string_view name);

struct DenseChannel {
    EnsembleSpec ensemble;
    ChannelEstimator estimator = ChannelEstimator::Direct;
    MatrixXc superoperator;
    /// Monte-Carlo standard error of each superoperator entry (modulus).
    Eigen::MatrixXd standard_error;
    int n_circuits = 0;

    int dim() const { return static_cast<int>(pow2(ensemble.n_qubits)); }
    MatrixXc apply(const MatrixXc &op) const;
};

struct InverseChannel {
    EnsembleSpec ensemble;
    MatrixXc superoperator;
    /// sigma_max / smallest retained singular value.
    double condition_number = 0.0;
    int rank = 0;
    /// Frobenius norm of (M M^+ - 1).
    double residual = 0.0;

    int dim() const { return static_cast<int>(pow2(ensemble.n_qubits)); }
    MatrixXc apply(const MatrixXc &op) const;
};

/// Exact single-circuit channel X -> sum_s <s|U X U^dagger|s> U^dagger|s><s|U.
MatrixXc circuit_superoperator(const MatrixXc &unitary);

/// Monte-Carlo average over n_circuits circuits drawn from the ensemble. The
/// returned estimator field is never Automatic.
DenseChannel estimate_channel(const EnsembleSpec &ensemble, int n_circuits, Rng &rng,
                              ChannelEstimator estimator = ChannelEstimator::Automatic);
DenseChannel estimate_channel(int n_qubits, int depth, int n_circuits, Rng &rng,
                              ChannelEstimator estimator = ChannelEstimator::Automatic);

/// Pseudo-inverse dropping singular values below rcond * sigma_max.
InverseChannel invert_channel(const DenseChannel &channel, double rcond = 1e-8);

/// M^-1(U^dagger|s><s|U) for every (setting, shot).
std::vector<DenseShadow> shallow_shadows(const MeasurementGroup &group, const InverseChannel &inverse);

/// Batch-averaged shallow shadows; n_batches = N_U gives per-setting means.
BatchShadowSet shallow_batch_shadows(const MeasurementGroup &group, const InverseChannel &inverse, int n_batches);

}  // namespace rmkit
