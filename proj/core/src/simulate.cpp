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

#include "rmkit/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "gate_kernels.hpp"
#include "rmkit/error.hpp"
#include "rmkit/parallel.hpp"

namespace rmkit {
namespace {

void check_sizes(int state_qubits, int setting_qubits) {
    require(
        state_qubits == setting_qubits, ErrorCode::SizeMismatch,
        "state has " + std::to_string(state_qubits) + " qubits but the setting has " + std::to_string(setting_qubits));
}

Gate adjoint_gate(const Gate &g) { return Gate{g.sites, g.unitary.adjoint()}; }

// U rho U^dagger via two column passes: M = U rho, then (U M^dagger)^dagger.
MatrixXc conjugate_by_setting(const MatrixXc &rho, const MeasurementSetting &setting) {
    MatrixXc m = rho;
    detail::apply_setting_to_columns(m, setting);
    MatrixXc mt = m.adjoint();
    detail::apply_setting_to_columns(mt, setting);
    return mt.adjoint();
}

MatrixXc conjugate_by_gate(const MatrixXc &rho, int n, const Gate &g) {
    MatrixXc m = rho;
    detail::apply_gate_to_columns(m, n, g);
    MatrixXc mt = m.adjoint();
    detail::apply_gate_to_columns(mt, n, g);
    return mt.adjoint();
}

Eigen::VectorXd cumulative(const Eigen::VectorXd &probs) {
    Eigen::VectorXd cdf(probs.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    return cdf;
}

// Draws basis indices from a distribution and writes their bits, site 1 first.
void sample_from_distribution(const Eigen::VectorXd &probs, int n_qubits, int n_shots, Rng &rng,
                              std::vector<std::uint8_t> &bits) {
    const Eigen::VectorXd cdf = cumulative(probs);
    const double total = cdf[cdf.size() - 1];
    const double *begin = cdf.data();
    const double *end = cdf.data() + cdf.size();
    for (int shot = 0; shot < n_shots; ++shot) {
        const double u = rng.uniform() * total;
        auto index = static_cast<std::size_t>(std::upper_bound(begin, end, u) - begin);
        index = std::min(index, static_cast<std::size_t>(cdf.size() - 1));
        // Skip zero-probability outcomes that upper_bound can land on at u == total.
        while (probs[static_cast<Eigen::Index>(index)] <= 0.0 && index > 0) {
            --index;
        }
        for (int site = 1; site <= n_qubits; ++site) {
            bits.push_back(static_cast<std::uint8_t>((index >> (n_qubits - site)) & 1U));
        }
    }
}

// Sequential conditional sampling: right environments once, then one
// left-to-right sweep per shot.
void sample_mps(const MatrixProductState &mps, int n_shots, Rng &rng, std::vector<std::uint8_t> &bits) {
    const int n = mps.n_qubits();
    std::vector<MatrixXc> right(static_cast<std::size_t>(n) + 1);
    right[static_cast<std::size_t>(n)] = MatrixXc::Ones(1, 1);
    for (int k = n - 1; k >= 0; --k) {
        const auto &t = mps.site(k);
        const auto &r = right[static_cast<std::size_t>(k) + 1];
        right[static_cast<std::size_t>(k)] =
            t.slices[0] * r * t.slices[0].adjoint() + t.slices[1] * r * t.slices[1].adjoint();
    }
    for (int shot = 0; shot < n_shots; ++shot) {
        Eigen::RowVectorXcd left = Eigen::RowVectorXcd::Ones(1);
        for (int k = 0; k < n; ++k) {
            const auto &t = mps.site(k);
            const auto &r = right[static_cast<std::size_t>(k) + 1];
            const Eigen::RowVectorXcd v0 = left * t.slices[0];
            const Eigen::RowVectorXcd v1 = left * t.slices[1];
            const double w0 = std::max(0.0, (v0 * r * v0.adjoint())(0, 0).real());
            const double w1 = std::max(0.0, (v1 * r * v1.adjoint())(0, 0).real());
            const int s = (rng.uniform() * (w0 + w1) < w0) ? 0 : 1;
            bits.push_back(static_cast<std::uint8_t>(s));
            left = (s == 0) ? v0 / std::sqrt(w0) : v1 / std::sqrt(w1);
        }
    }
}

// Random Pauli with probability 3p/4 right before the measurement; X and Y flip the bit.
void apply_readout_paulis(std::vector<std::uint8_t> &bits, int n_qubits, const NoiseModel &noise, Rng &rng) {
    const auto &p = noise.strengths();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const double strength = p[i % static_cast<std::size_t>(n_qubits)];
        if (strength > 0.0 && rng.uniform() < 0.75 * strength) {
            const auto pauli = rng.below(3);  // 0: X, 1: Y, 2: Z
            if (pauli < 2) {
                bits[i] ^= 1U;
            }
        }
    }
}

Eigen::VectorXd probabilities_from_amplitudes(const VectorXc &amps) {
    Eigen::VectorXd probs = amps.cwiseAbs2();
    return probs / probs.sum();
}

PureStateDense mps_as_dense(const MatrixProductState &mps) {
    require(mps.n_qubits() <= kMaxDenseQubits, ErrorCode::TooLargeForDense,
            "shallow-circuit settings on MPS inputs are simulated densely (N <= 14)");
    VectorXc amps = mps.to_dense();
    amps /= amps.norm();
    return PureStateDense(std::move(amps));
}

}  // namespace

PureStateDense apply_setting(const PureStateDense &psi, const MeasurementSetting &setting) {
    check_sizes(psi.n_qubits(), n_qubits(setting));
    VectorXc amps = psi.amplitudes();
    detail::apply_setting_to_columns(amps, setting);
    return PureStateDense(std::move(amps));
}

PureStateDense apply_setting_adjoint(const PureStateDense &psi, const MeasurementSetting &setting) {
    check_sizes(psi.n_qubits(), n_qubits(setting));
    const int n = psi.n_qubits();
    VectorXc amps = psi.amplitudes();
    if (const auto *local = std::get_if<LocalUnitarySetting>(&setting)) {
        for (int site = n; site >= 1; --site) {
            detail::apply_gate_to_columns(amps, n, Gate{{site}, local->unitary(site).adjoint()});
        }
    } else if (const auto *shallow = std::get_if<ShallowCircuitSetting>(&setting)) {
        const auto &gates = shallow->gates();
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
            detail::apply_gate_to_columns(amps, n, adjoint_gate(*it));
        }
    }
    return PureStateDense(std::move(amps));
}

DensityMatrixDense apply_setting(const DensityMatrixDense &rho, const MeasurementSetting &setting) {
    check_sizes(rho.n_qubits(), n_qubits(setting));
    MatrixXc out = conjugate_by_setting(rho.matrix(), setting);
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrixDense(std::move(out));
}

MatrixProductState apply_setting(const MatrixProductState &mps, const MeasurementSetting &setting) {
    check_sizes(mps.n_qubits(), n_qubits(setting));
    require(is_local(setting), ErrorCode::UnsupportedSetting, "MPS rotations require product-form settings");
    const auto unitaries = local_unitaries(setting);
    std::vector<SiteTensor> sites = mps.sites();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const Mat2 &u = unitaries[i];
        const SiteTensor old = sites[i];
        sites[i].slices[0] = u(0, 0) * old.slices[0] + u(0, 1) * old.slices[1];
        sites[i].slices[1] = u(1, 0) * old.slices[0] + u(1, 1) * old.slices[1];
    }
    return MatrixProductState(std::move(sites));
}

DensityMatrixDense apply_noise(const DensityMatrixDense &rho, const NoiseModel &noise) {
    const int n = rho.n_qubits();
    require(noise.n_qubits() == n, ErrorCode::SizeMismatch, "noise model length must equal qubit count");
    MatrixXc current = rho.matrix();
    for (int site = 1; site <= n; ++site) {
        const double p = noise.strengths()[static_cast<std::size_t>(site - 1)];
        if (p == 0.0) {
            continue;
        }
        MatrixXc next = (1.0 - 0.75 * p) * current;
        for (Pauli letter : {Pauli::X, Pauli::Y, Pauli::Z}) {
            next += 0.25 * p * conjugate_by_gate(current, n, Gate{{site}, pauli_matrix(letter)});
        }
        current = std::move(next);
    }
    current = 0.5 * (current + current.adjoint()).eval();
    return DensityMatrixDense(std::move(current));
}

MeasurementProbability born_probabilities(const QuantumState &state, const MeasurementSetting &setting) {
    check_sizes(n_qubits(state), n_qubits(setting));
    Eigen::VectorXd probs;
    if (const auto *psi = std::get_if<PureStateDense>(&state)) {
        probs = probabilities_from_amplitudes(apply_setting(*psi, setting).amplitudes());
    } else if (const auto *rho = std::get_if<DensityMatrixDense>(&state)) {
        probs = apply_setting(*rho, setting).matrix().diagonal().real().cwiseMax(0.0);
    } else {
        const auto &mps = std::get<MatrixProductState>(state);
        if (is_local(setting)) {
            probs = probabilities_from_amplitudes(apply_setting(mps, setting).to_dense());
        } else {
            probs = probabilities_from_amplitudes(apply_setting(mps_as_dense(mps), setting).amplitudes());
        }
    }
    return MeasurementProbability{std::move(probs), setting};
}

MeasurementData sample_measurements(const QuantumState &state, const MeasurementSetting &setting, int n_shots,
                                    const std::optional<NoiseModel> &noise, Rng &rng) {
    const int n = n_qubits(state);
    check_sizes(n, n_qubits(setting));
    require(n_shots >= 1, ErrorCode::InvalidSize, "at least one shot is required");
    if (noise) {
        require(noise->n_qubits() == n, ErrorCode::SizeMismatch, "noise model length must equal qubit count");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<std::size_t>(n_shots) * static_cast<std::size_t>(n));

    if (const auto *rho = std::get_if<DensityMatrixDense>(&state)) {
        const DensityMatrixDense noisy = noise ? apply_noise(*rho, *noise) : *rho;
        sample_from_distribution(born_probabilities(noisy, setting).probabilities, n, n_shots, rng, bits);
        return MeasurementData(setting, Outcomes(n_shots, n, std::move(bits)));
    }

    if (const auto *mps = std::get_if<MatrixProductState>(&state); mps && is_local(setting)) {
        sample_mps(apply_setting(*mps, setting), n_shots, rng, bits);
    } else {
        const PureStateDense psi = mps ? mps_as_dense(*mps) : std::get<PureStateDense>(state);
        sample_from_distribution(born_probabilities(psi, setting).probabilities, n, n_shots, rng, bits);
    }
    if (noise) {
        apply_readout_paulis(bits, n, *noise, rng);
    }
    return MeasurementData(setting, Outcomes(n_shots, n, std::move(bits)));
}

MeasurementGroup simulate_group(const QuantumState &state, std::span<const MeasurementSetting> settings, int n_shots,
                                const std::optional<NoiseModel> &noise, RngSeed seed) {
    require(!settings.empty(), ErrorCode::InvalidSize, "at least one setting is required");
    std::vector<std::optional<MeasurementData>> slots(settings.size());
    parallel_for(settings.size(), [&](std::size_t j) {
        Rng rng(seed.substream(j));
        slots[j] = sample_measurements(state, settings[j], n_shots, noise, rng);
    });
    std::vector<MeasurementData> entries;
    entries.reserve(slots.size());
    for (auto &s : slots) {
        entries.push_back(std::move(*s));
    }
    return MeasurementGroup(std::move(entries));
}

double pauli_expectation(const QuantumState &state, const PauliObservable &obs) {
    const int n = n_qubits(state);
    require(obs.n_qubits() == n, ErrorCode::SizeMismatch, "observable and state sizes differ");
    double total = 0.0;
    for (const auto &term : obs.terms()) {
        double value = 0.0;
        if (const auto *mps = std::get_if<MatrixProductState>(&state)) {
            MatrixXc env = MatrixXc::Ones(1, 1);
            MatrixXc norm_env = MatrixXc::Ones(1, 1);
            for (int k = 0; k < n; ++k) {
                const auto &t = mps->site(k);
                const Mat2 &p = pauli_matrix(term.letters[static_cast<std::size_t>(k)]);
                MatrixXc next = MatrixXc::Zero(t.right_dim(), t.right_dim());
                for (int s = 0; s < 2; ++s) {
                    for (int sp = 0; sp < 2; ++sp) {
                        if (p(s, sp) != Complex(0.0)) {
                            next += p(s, sp) * (t.slices[s].adjoint() * env * t.slices[sp]);
                        }
                    }
                }
                env = std::move(next);
                norm_env =
                    (t.slices[0].adjoint() * norm_env * t.slices[0] + t.slices[1].adjoint() * norm_env * t.slices[1])
                        .eval();
            }
            value = env(0, 0).real() / norm_env(0, 0).real();
        } else if (const auto *psi = std::get_if<PureStateDense>(&state)) {
            VectorXc v = psi->amplitudes();
            for (int site = 1; site <= n; ++site) {
                const Pauli letter = term.letters[static_cast<std::size_t>(site - 1)];
                if (letter != Pauli::I) {
                    detail::apply_gate_to_columns(v, n, Gate{{site}, pauli_matrix(letter)});
                }
            }
            value = psi->amplitudes().dot(v).real();
        } else {
            MatrixXc m = std::get<DensityMatrixDense>(state).matrix();
            for (int site = 1; site <= n; ++site) {
                const Pauli letter = term.letters[static_cast<std::size_t>(site - 1)];
                if (letter != Pauli::I) {
                    detail::apply_gate_to_columns(m, n, Gate{{site}, pauli_matrix(letter)});
                }
            }
            value = m.trace().real();
        }
        total += term.coefficient * value;
    }
    return total;
}

}  // namespace rmkit
