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

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "rmkit/core.hpp"
#include "rmkit/random.hpp"

namespace rmkit {

/// Statevector backend limit.
inline constexpr int kMaxDenseQubits = 14;
/// Density-matrix backend limit.
inline constexpr int kMaxDensityQubits = 10;
/// Largest N for which an MPS may be contracted to a dense vector.
inline constexpr int kMaxContractQubits = 24;

/// Amplitudes indexed with site 1 as the most significant bit.
class PureStateDense {
  public:
    explicit PureStateDense(VectorXc amplitudes);

    static PureStateDense zero(int n_qubits);
    static PureStateDense uniform_superposition(int n_qubits);
    /// Haar-random pure state.
    static PureStateDense random(int n_qubits, Rng &rng);

    int n_qubits() const noexcept { return n_qubits_; }
    const VectorXc &amplitudes() const noexcept { return amplitudes_; }

  private:
    int n_qubits_;
    VectorXc amplitudes_;
};

class DensityMatrixDense {
  public:
    explicit DensityMatrixDense(MatrixXc matrix);

    static DensityMatrixDense from_pure(const PureStateDense &psi);
    static DensityMatrixDense maximally_mixed(int n_qubits);
    /// G G^dagger / tr(G G^dagger) for a 2^N x rank complex Ginibre matrix G.
    static DensityMatrixDense random(int n_qubits, int rank, Rng &rng);

    int n_qubits() const noexcept { return n_qubits_; }
    const MatrixXc &matrix() const noexcept { return matrix_; }

  private:
    int n_qubits_;
    MatrixXc matrix_;
};

/// Site tensor A[s] for s in {0,1}, each left-bond x right-bond.
struct SiteTensor {
    std::array<MatrixXc, 2> slices;

    Eigen::Index left_dim() const { return slices[0].rows(); }
    Eigen::Index right_dim() const { return slices[0].cols(); }
};

/// psi(s_1..s_N) = A_1[s_1] A_2[s_2] ... A_N[s_N].
class MatrixProductState {
  public:
    explicit MatrixProductState(std::vector<SiteTensor> sites);

    int n_qubits() const noexcept { return static_cast<int>(sites_.size()); }
    /// 0-based.
    const SiteTensor &site(int index) const { return sites_.at(static_cast<std::size_t>(index)); }
    const std::vector<SiteTensor> &sites() const noexcept { return sites_; }
    /// N+1 entries, boundaries included.
    std::vector<int> bond_dims() const;

    double norm() const;
    Complex amplitude(std::span<const std::uint8_t> bits) const;
    /// Dense amplitudes, N <= 24.
    VectorXc to_dense() const;

    /// Left-canonical copy with unit norm.
    MatrixProductState canonicalized() const;

  private:
    std::vector<SiteTensor> sites_;
};

/// Random MPS with bond dimension min(chi, 2^k, 2^(N-k)) at cut k; entries are
/// i.i.d. standard complex Gaussians, then left-canonicalized.
MatrixProductState random_mps(int n_qubits, int chi, Rng &rng);
MatrixProductState ghz_state(int n_qubits);
MatrixProductState product_zero(int n_qubits);

/// Per-qubit depolarizing strengths p_i in [0, 1].
class NoiseModel {
  public:
    explicit NoiseModel(std::vector<double> depolarizing);

    static NoiseModel uniform(int n_qubits, double p);
    /// p_i ~ Normal(mean, sd) clipped to [0, 1].
    static NoiseModel random(int n_qubits, double mean, double sd, Rng &rng);

    int n_qubits() const noexcept { return static_cast<int>(strengths_.size()); }
    const std::vector<double> &strengths() const noexcept { return strengths_; }

  private:
    std::vector<double> strengths_;
};

using QuantumState = std::variant<PureStateDense, DensityMatrixDense, MatrixProductState>;

int n_qubits(const QuantumState &state);

}  // namespace rmkit
