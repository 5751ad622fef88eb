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

#include "rmkit/state.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "rmkit/error.hpp"

namespace rmkit {
namespace {

int log2_exact(Eigen::Index size) {
    int n = 0;
    while ((Eigen::Index{1} << n) < size) {
        ++n;
    }
    require((Eigen::Index{1} << n) == size, ErrorCode::InvalidSize, "dimension must be a power of two");
    return n;
}

Complex standard_complex_gaussian(Rng &rng) {
    const double scale = 1.0 / std::sqrt(2.0);
    const double re = rng.normal();
    const double im = rng.normal();
    return {re * scale, im * scale};
}

}  // namespace

PureStateDense::PureStateDense(VectorXc amplitudes) : amplitudes_(std::move(amplitudes)) {
    require(amplitudes_.size() >= 2, ErrorCode::InvalidSize, "state needs at least one qubit");
    n_qubits_ = log2_exact(amplitudes_.size());
    require(n_qubits_ <= kMaxDenseQubits, ErrorCode::TooLargeForDense, "statevectors are limited to 14 qubits");
    require(std::abs(amplitudes_.norm() - 1.0) < 1e-10, ErrorCode::InvalidState, "statevector must be normalized");
}

PureStateDense PureStateDense::zero(int n_qubits) {
    VectorXc amps = VectorXc::Zero(static_cast<Eigen::Index>(pow2(n_qubits)));
    amps[0] = 1.0;
    return PureStateDense(std::move(amps));
}

PureStateDense PureStateDense::uniform_superposition(int n_qubits) {
    const auto dim = static_cast<Eigen::Index>(pow2(n_qubits));
    return PureStateDense(VectorXc::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

PureStateDense PureStateDense::random(int n_qubits, Rng &rng) {
    const auto dim = static_cast<Eigen::Index>(pow2(n_qubits));
    VectorXc amps(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        amps[i] = standard_complex_gaussian(rng);
    }
    amps /= amps.norm();
    return PureStateDense(std::move(amps));
}

DensityMatrixDense::DensityMatrixDense(MatrixXc matrix) : matrix_(std::move(matrix)) {
    require(matrix_.rows() == matrix_.cols() && matrix_.rows() >= 2, ErrorCode::InvalidSize,
            "density matrix must be square with at least one qubit");
    n_qubits_ = log2_exact(matrix_.rows());
    require(n_qubits_ <= kMaxDensityQubits, ErrorCode::TooLargeForDense, "density matrices are limited to 10 qubits");
    require((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() < 1e-10, ErrorCode::InvalidState,
            "density matrix must be Hermitian");
    require(std::abs(matrix_.trace() - Complex(1.0)) < 1e-10, ErrorCode::InvalidState,
            "density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(matrix_, Eigen::EigenvaluesOnly);
    require(solver.eigenvalues().minCoeff() >= -1e-8, ErrorCode::InvalidState,
            "density matrix must be positive semidefinite");
}

DensityMatrixDense DensityMatrixDense::from_pure(const PureStateDense &psi) {
    return DensityMatrixDense(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrixDense DensityMatrixDense::maximally_mixed(int n_qubits) {
    const auto dim = static_cast<Eigen::Index>(pow2(n_qubits));
    return DensityMatrixDense(MatrixXc::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrixDense DensityMatrixDense::random(int n_qubits, int rank, Rng &rng) {
    require(rank >= 1, ErrorCode::InvalidArgument, "rank must be positive");
    const auto dim = static_cast<Eigen::Index>(pow2(n_qubits));
    MatrixXc g(dim, rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            g(r, c) = standard_complex_gaussian(rng);
        }
    }
    MatrixXc rho = g * g.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return DensityMatrixDense(std::move(rho));
}

MatrixProductState::MatrixProductState(std::vector<SiteTensor> sites) : sites_(std::move(sites)) {
    require(!sites_.empty(), ErrorCode::InvalidSize, "MPS needs at least one site");
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const auto &t = sites_[i];
        require(t.slices[0].rows() == t.slices[1].rows() && t.slices[0].cols() == t.slices[1].cols(),
                ErrorCode::SizeMismatch, "both physical slices must share bond dimensions");
        require(t.left_dim() >= 1 && t.right_dim() >= 1, ErrorCode::InvalidSize, "bond dimensions must be positive");
        if (i > 0) {
            require(sites_[i - 1].right_dim() == t.left_dim(), ErrorCode::SizeMismatch,
                    "adjacent bond dimensions disagree");
        }
    }
    require(sites_.front().left_dim() == 1 && sites_.back().right_dim() == 1, ErrorCode::SizeMismatch,
            "boundary bonds must have dimension 1");
    require(norm() > 0.0, ErrorCode::InvalidState, "MPS has zero norm");
}

std::vector<int> MatrixProductState::bond_dims() const {
    std::vector<int> dims;
    dims.push_back(static_cast<int>(sites_.front().left_dim()));
    for (const auto &t : sites_) {
        dims.push_back(static_cast<int>(t.right_dim()));
    }
    return dims;
}

double MatrixProductState::norm() const {
    MatrixXc env = MatrixXc::Identity(1, 1);
    for (const auto &t : sites_) {
        env = (t.slices[0].adjoint() * env * t.slices[0] + t.slices[1].adjoint() * env * t.slices[1]).eval();
    }
    return std::sqrt(std::max(0.0, env(0, 0).real()));
}

Complex MatrixProductState::amplitude(std::span<const std::uint8_t> bits) const {
    require(bits.size() == sites_.size(), ErrorCode::SizeMismatch, "bit string length must equal qubit count");
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Ones(1);
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        row = (row * sites_[i].slices[bits[i]]).eval();
    }
    return row(0);
}

VectorXc MatrixProductState::to_dense() const {
    require(n_qubits() <= kMaxContractQubits, ErrorCode::TooLargeForDense, "dense contraction is limited to 24 qubits");
    MatrixXc partial = MatrixXc::Ones(1, 1);
    for (const auto &t : sites_) {
        MatrixXc next(partial.rows() * 2, t.right_dim());
        for (Eigen::Index i = 0; i < partial.rows(); ++i) {
            next.row(2 * i) = partial.row(i) * t.slices[0];
            next.row(2 * i + 1) = partial.row(i) * t.slices[1];
        }
        partial = std::move(next);
    }
    return partial.col(0);
}

MatrixProductState MatrixProductState::canonicalized() const {
    std::vector<SiteTensor> out = sites_;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        auto &t = out[i];
        const Eigen::Index dl = t.left_dim();
        const Eigen::Index dr = t.right_dim();
        // Rows ordered (s, left), columns right.
        MatrixXc stacked(2 * dl, dr);
        stacked.topRows(dl) = t.slices[0];
        stacked.bottomRows(dl) = t.slices[1];
        Eigen::HouseholderQR<MatrixXc> qr(stacked);
        const Eigen::Index k = std::min<Eigen::Index>(2 * dl, dr);
        const MatrixXc q = qr.householderQ() * MatrixXc::Identity(2 * dl, k);
        const MatrixXc r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        t.slices[0] = q.topRows(dl);
        t.slices[1] = q.bottomRows(dl);
        auto &next = out[i + 1];
        next.slices[0] = (r * next.slices[0]).eval();
        next.slices[1] = (r * next.slices[1]).eval();
    }
    auto &last = out.back();
    const double n = std::sqrt(last.slices[0].squaredNorm() + last.slices[1].squaredNorm());
    require(n > 0.0, ErrorCode::InvalidState, "MPS has zero norm");
    last.slices[0] /= n;
    last.slices[1] /= n;
    return MatrixProductState(std::move(out));
}

MatrixProductState random_mps(int n_qubits, int chi, Rng &rng) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    require(chi >= 1, ErrorCode::InvalidSize, "bond dimension must be positive");
    auto bond = [&](int cut) {
        const int small = std::min(cut, n_qubits - cut);
        if (small >= 30) {
            return chi;
        }
        return std::min(chi, 1 << small);
    };
    std::vector<SiteTensor> sites;
    sites.reserve(static_cast<std::size_t>(n_qubits));
    for (int k = 0; k < n_qubits; ++k) {
        const int dl = bond(k);
        const int dr = bond(k + 1);
        SiteTensor t;
        for (auto &slice : t.slices) {
            slice.resize(dl, dr);
            for (int c = 0; c < dr; ++c) {
                for (int r = 0; r < dl; ++r) {
                    slice(r, c) = standard_complex_gaussian(rng);
                }
            }
        }
        sites.push_back(std::move(t));
    }
    return MatrixProductState(std::move(sites)).canonicalized();
}

MatrixProductState ghz_state(int n_qubits) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    const double amp = 1.0 / std::sqrt(2.0);
    std::vector<SiteTensor> sites(static_cast<std::size_t>(n_qubits));
    if (n_qubits == 1) {
        sites[0].slices = {MatrixXc::Constant(1, 1, amp), MatrixXc::Constant(1, 1, amp)};
        return MatrixProductState(std::move(sites));
    }
    for (int k = 0; k < n_qubits; ++k) {
        const Eigen::Index dl = (k == 0) ? 1 : 2;
        const Eigen::Index dr = (k == n_qubits - 1) ? 1 : 2;
        for (int s = 0; s < 2; ++s) {
            MatrixXc slice = MatrixXc::Zero(dl, dr);
            slice(dl == 1 ? 0 : s, dr == 1 ? 0 : s) = (k == 0) ? Complex(amp) : Complex(1.0);
            sites[static_cast<std::size_t>(k)].slices[static_cast<std::size_t>(s)] = std::move(slice);
        }
    }
    return MatrixProductState(std::move(sites));
}

MatrixProductState product_zero(int n_qubits) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    std::vector<SiteTensor> sites(static_cast<std::size_t>(n_qubits));
    for (auto &t : sites) {
        t.slices = {MatrixXc::Ones(1, 1), MatrixXc::Zero(1, 1)};
    }
    return MatrixProductState(std::move(sites));
}

NoiseModel::NoiseModel(std::vector<double> depolarizing) : strengths_(std::move(depolarizing)) {
    require(!strengths_.empty(), ErrorCode::InvalidSize, "noise model needs at least one qubit");
    for (double p : strengths_) {
        require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument,
                "depolarizing strengths must lie in [0, 1]");
    }
}

NoiseModel NoiseModel::uniform(int n_qubits, double p) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    return NoiseModel(std::vector<double>(static_cast<std::size_t>(n_qubits), p));
}

NoiseModel NoiseModel::random(int n_qubits, double mean, double sd, Rng &rng) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    std::vector<double> p(static_cast<std::size_t>(n_qubits));
    for (auto &x : p) {
        x = std::clamp(mean + sd * rng.normal(), 0.0, 1.0);
    }
    return NoiseModel(std::move(p));
}

int n_qubits(const QuantumState &state) {
    return std::visit([](const auto &s) { return s.n_qubits(); }, state);
}

}  // namespace rmkit
