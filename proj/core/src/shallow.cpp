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

#include "rmkit/shallow.hpp"

#include <bit>
#include <map>

#include <Eigen/SVD>

#include "rmkit/error.hpp"
#include "rmkit/parallel.hpp"
#include "rmkit/sampling.hpp"

namespace rmkit {
namespace {

constexpr int kChunk = 32;

MatrixXc apply_superoperator(const MatrixXc &superop, const MatrixXc &op, int dim) {
    require(op.rows() == dim && op.cols() == dim, ErrorCode::SizeMismatch, "operator does not match the channel");
    const Eigen::Map<const VectorXc> vec(op.data(), static_cast<Eigen::Index>(dim) * dim);
    VectorXc out = superop * vec;
    return Eigen::Map<MatrixXc>(out.data(), dim, dim);
}

void check_ensemble(const MeasurementSetting &setting, const EnsembleSpec &ensemble) {
    require(n_qubits(setting) == ensemble.n_qubits, ErrorCode::EnsembleMismatch,
            "setting size differs from the channel's ensemble");
    if (ensemble.kind == ChannelEnsemble::Shallow) {
        const auto *shallow = std::get_if<ShallowCircuitSetting>(&setting);
        require(shallow != nullptr && shallow->depth() == ensemble.depth, ErrorCode::EnsembleMismatch,
                "setting is not a shallow circuit of depth " + std::to_string(ensemble.depth));
    } else {
        require(std::holds_alternative<LocalUnitarySetting>(setting), ErrorCode::EnsembleMismatch,
                "channel was learned for local Haar settings");
    }
}

MeasurementSetting draw_circuit(const EnsembleSpec &ensemble, Rng &rng) {
    if (ensemble.kind == ChannelEnsemble::LocalHaar) {
        return local_unitary_setting(ensemble.n_qubits, rng);
    }
    return shallow_setting(ensemble.n_qubits, ensemble.depth, rng);
}

template <typename T>
void walsh_hadamard(T *v, int d) {
    for (int half = 1; half < d; half *= 2) {
        for (int start = 0; start < d; start += 2 * half) {
            for (int i = start; i < start + half; ++i) {
                const T a = v[i];
                const T b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
        }
    }
}

// lambda[x d + z] = (1/d) sum_s <s|U Q U^dagger|s>^2 for Q = i^{|x&z|} X^x Z^z.
Eigen::VectorXd pauli_eigenvalues(const MatrixXc &unitary) {
    const int d = static_cast<int>(unitary.rows());
    const MatrixXc u_dag = unitary.adjoint();
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * d);
    std::vector<Complex> g(static_cast<std::size_t>(d));
    for (int s = 0; s < d; ++s) {
        const auto u = u_dag.col(s);
        for (int x = 0; x < d; ++x) {
            for (int j = 0; j < d; ++j) {
                g[static_cast<std::size_t>(j)] = std::conj(u(j ^ x)) * u(j);
            }
            walsh_hadamard(g.data(), d);
            for (int z = 0; z < d; ++z) {
                const Complex w = g[static_cast<std::size_t>(z)];
                double value = 0.0;
                switch (std::popcount(static_cast<unsigned>(x & z)) % 4) {
                    case 0: value = w.real(); break;
                    case 1: value = -w.imag(); break;
                    case 2: value = -w.real(); break;
                    default: value = w.imag(); break;
                }
                lambda(static_cast<Eigen::Index>(x) * d + z) += value * value;
            }
        }
    }
    return lambda / static_cast<double>(d);
}

struct TwirlSums {
    Eigen::VectorXd sum;
    // Per x, sum of lambda_x lambda_x^T over circuits.
    std::vector<Eigen::MatrixXd> second;
};

DenseChannel twirled_channel(const EnsembleSpec &ensemble, const std::vector<MatrixXc> &unitaries) {
    const int d = static_cast<int>(pow2(ensemble.n_qubits));
    const std::size_t n_chunks = (unitaries.size() + kChunk - 1) / kChunk;
    std::vector<TwirlSums> chunks(n_chunks);
    parallel_for(n_chunks, [&](std::size_t chunk) {
        auto &acc = chunks[chunk];
        acc.sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * d);
        acc.second.assign(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(d, d));
        const std::size_t end = std::min(unitaries.size(), (chunk + 1) * kChunk);
        for (std::size_t c = chunk * kChunk; c < end; ++c) {
            const Eigen::VectorXd lambda = pauli_eigenvalues(unitaries[c]);
            acc.sum += lambda;
            for (int x = 0; x < d; ++x) {
                const auto block = lambda.segment(static_cast<Eigen::Index>(x) * d, d);
                acc.second[static_cast<std::size_t>(x)].noalias() += block * block.transpose();
            }
        }
    });
    TwirlSums total{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * d),
                    std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(d, d))};
    for (const auto &c : chunks) {
        total.sum += c.sum;
        for (int x = 0; x < d; ++x) total.second[static_cast<std::size_t>(x)] += c.second[static_cast<std::size_t>(x)];
    }

    const double k = static_cast<double>(unitaries.size());
    const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
    DenseChannel out;
    out.ensemble = ensemble;
    out.estimator = ChannelEstimator::PauliTwirled;
    out.n_circuits = static_cast<int>(unitaries.size());
    out.superoperator = MatrixXc::Zero(d2, d2);
    out.standard_error = Eigen::MatrixXd::Zero(d2, d2);
    // Entry (vec index (j^x) + d j, (l^x) + d l) is (1/d) sum_z lambda_{x,z} (-1)^{z.(j^l)}.
    for (int x = 0; x < d; ++x) {
        Eigen::VectorXd mean = total.sum.segment(static_cast<Eigen::Index>(x) * d, d) / k;
        Eigen::VectorXd transformed = mean;
        walsh_hadamard(transformed.data(), d);
        Eigen::VectorXd spread = Eigen::VectorXd::Zero(d);
        if (unitaries.size() >= 2) {
            // Diagonal of H C H with C the sample covariance of lambda_x.
            Eigen::MatrixXd cov = (total.second[static_cast<std::size_t>(x)] - k * mean * mean.transpose()) / (k - 1.0);
            for (int c = 0; c < d; ++c) walsh_hadamard(cov.col(c).data(), d);
            Eigen::MatrixXd rows = cov.transpose();
            for (int c = 0; c < d; ++c) walsh_hadamard(rows.col(c).data(), d);
            spread = (rows.diagonal().cwiseMax(0.0) / (k * d * d)).cwiseSqrt();
        }
        for (int j = 0; j < d; ++j) {
            for (int l = 0; l < d; ++l) {
                const Eigen::Index a = (j ^ x) + static_cast<Eigen::Index>(d) * j;
                const Eigen::Index b = (l ^ x) + static_cast<Eigen::Index>(d) * l;
                out.superoperator(a, b) = transformed(j ^ l) / d;
                out.standard_error(a, b) = spread(j ^ l);
            }
        }
    }
    return out;
}

// Shadows of every distinct outcome of one setting, with their counts.
struct SettingShadows {
    std::vector<MatrixXc> shadows;
    std::vector<int> counts;
    std::vector<int> shot_to_distinct;
};

SettingShadows setting_shadows(const MeasurementData &data, const InverseChannel &inverse) {
    const int n = data.n_qubits();
    const int dim = static_cast<int>(pow2(n));
    const MatrixXc u_dag = dense_unitary(data.setting()).adjoint();
    std::map<std::uint64_t, int> distinct;
    SettingShadows out;
    out.shot_to_distinct.reserve(static_cast<std::size_t>(data.n_shots()));
    for (int shot = 0; shot < data.n_shots(); ++shot) {
        const auto index = data.outcomes().shot_index(shot);
        auto [it, inserted] = distinct.emplace(index, static_cast<int>(out.counts.size()));
        if (inserted) {
            out.counts.push_back(0);
        }
        ++out.counts[static_cast<std::size_t>(it->second)];
        out.shot_to_distinct.push_back(it->second);
    }
    std::vector<std::uint64_t> indices(out.counts.size());
    for (const auto &[index, slot] : distinct) {
        indices[static_cast<std::size_t>(slot)] = index;
    }
    MatrixXc projectors(static_cast<Eigen::Index>(dim) * dim, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const VectorXc v = u_dag.col(static_cast<Eigen::Index>(indices[k]));
        const MatrixXc p = v * v.adjoint();
        projectors.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const VectorXc>(p.data(), p.size());
    }
    const MatrixXc images = inverse.superoperator * projectors;
    for (Eigen::Index k = 0; k < images.cols(); ++k) {
        out.shadows.emplace_back(Eigen::Map<const MatrixXc>(images.col(k).data(), dim, dim));
    }
    return out;
}

}  // namespace

std::string_view to_string(ChannelEnsemble kind) {
    return kind == ChannelEnsemble::LocalHaar ? "local-haar" : "shallow";
}

ChannelEnsemble parse_channel_ensemble(std::string_view name) {
    if (name == "local-haar") return ChannelEnsemble::LocalHaar;
    if (name == "shallow") return ChannelEnsemble::Shallow;
    fail(ErrorCode::InvalidArgument, "unknown channel ensemble: " + std::string(name));
}

MatrixXc DenseChannel::apply(const MatrixXc &op) const { return apply_superoperator(superoperator, op, dim()); }

MatrixXc InverseChannel::apply(const MatrixXc &op) const { return apply_superoperator(superoperator, op, dim()); }

MatrixXc circuit_superoperator(const MatrixXc &unitary) {
    const Eigen::Index dim = unitary.rows();
    const MatrixXc u_dag = unitary.adjoint();
    // Column s holds vec(P_s), P_s = U^dagger|s><s|U; the channel is sum_s vec(P_s) vec(P_s)^dagger.
    MatrixXc columns(dim * dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const MatrixXc p = u_dag.col(s) * u_dag.col(s).adjoint();
        columns.col(s) = Eigen::Map<const VectorXc>(p.data(), p.size());
    }
    return columns * columns.adjoint();
}

bool pauli_invariant(const EnsembleSpec &ensemble) {
    if (ensemble.kind == ChannelEnsemble::LocalHaar) return true;
    if (ensemble.n_qubits < 2) return false;
    return ensemble.depth >= (ensemble.n_qubits % 2 == 0 ? 1 : 2);
}

std::string_view to_string(ChannelEstimator estimator) {
    switch (estimator) {
        case ChannelEstimator::Automatic: return "automatic";
        case ChannelEstimator::Direct: return "direct";
        default: return "pauli-twirled";
    }
}

ChannelEstimator parse_channel_estimator(std::string_view name) {
    if (name == "automatic") return ChannelEstimator::Automatic;
    if (name == "direct") return ChannelEstimator::Direct;
    if (name == "pauli-twirled") return ChannelEstimator::PauliTwirled;
    fail(ErrorCode::InvalidArgument, "unknown channel estimator: " + std::string(name));
}

DenseChannel estimate_channel(const EnsembleSpec &ensemble, int n_circuits, Rng &rng, ChannelEstimator estimator) {
    require(ensemble.n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    require(ensemble.n_qubits <= kMaxChannelQubits, ErrorCode::TooLarge, "dense channels are limited to 6 qubits");
    require(n_circuits >= 1, ErrorCode::InvalidSize, "at least one training circuit is required");

    std::vector<MatrixXc> unitaries;
    unitaries.reserve(static_cast<std::size_t>(n_circuits));
    for (int c = 0; c < n_circuits; ++c) {
        unitaries.push_back(dense_unitary(draw_circuit(ensemble, rng)));
    }
    if (estimator == ChannelEstimator::Automatic) {
        estimator = pauli_invariant(ensemble) ? ChannelEstimator::PauliTwirled : ChannelEstimator::Direct;
    }
    if (estimator == ChannelEstimator::PauliTwirled) {
        require(pauli_invariant(ensemble), ErrorCode::InvalidArgument,
                "the Pauli-twirled estimator needs a Pauli-invariant ensemble");
        return twirled_channel(ensemble, unitaries);
    }

    const Eigen::Index d2 = static_cast<Eigen::Index>(pow2(2 * ensemble.n_qubits));
    const std::size_t n_chunks = (unitaries.size() + kChunk - 1) / kChunk;
    std::vector<MatrixXc> sums(n_chunks, MatrixXc::Zero(d2, d2));
    std::vector<Eigen::MatrixXd> squares(n_chunks, Eigen::MatrixXd::Zero(d2, d2));
    parallel_for(n_chunks, [&](std::size_t chunk) {
        const std::size_t end = std::min(unitaries.size(), (chunk + 1) * kChunk);
        for (std::size_t c = chunk * kChunk; c < end; ++c) {
            const MatrixXc term = circuit_superoperator(unitaries[c]);
            sums[chunk] += term;
            squares[chunk] += term.cwiseAbs2();
        }
    });

    DenseChannel out;
    out.ensemble = ensemble;
    out.estimator = ChannelEstimator::Direct;
    out.n_circuits = n_circuits;
    out.superoperator = MatrixXc::Zero(d2, d2);
    Eigen::MatrixXd square_sum = Eigen::MatrixXd::Zero(d2, d2);
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
        out.superoperator += sums[chunk];
        square_sum += squares[chunk];
    }
    const double k = n_circuits;
    out.superoperator /= k;
    if (n_circuits >= 2) {
        const Eigen::MatrixXd var = ((square_sum - k * out.superoperator.cwiseAbs2()) / (k - 1.0)).cwiseMax(0.0);
        out.standard_error = (var / k).cwiseSqrt();
    } else {
        out.standard_error = Eigen::MatrixXd::Zero(d2, d2);
    }
    return out;
}

DenseChannel estimate_channel(int n_qubits, int depth, int n_circuits, Rng &rng, ChannelEstimator estimator) {
    return estimate_channel(EnsembleSpec{ChannelEnsemble::Shallow, n_qubits, depth}, n_circuits, rng, estimator);
}

InverseChannel invert_channel(const DenseChannel &channel, double rcond) {
    require(rcond > 0.0 && rcond < 1.0, ErrorCode::InvalidArgument, "rcond must lie in (0, 1)");
    const MatrixXc &m = channel.superoperator;
    Eigen::BDCSVD<MatrixXc> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sigma = svd.singularValues();
    require(sigma.size() > 0 && sigma[0] > 0.0, ErrorCode::ChannelNotInvertible, "channel is identically zero");
    const double cutoff = rcond * sigma[0];
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma[rank] >= cutoff) {
        ++rank;
    }
    require(rank > 0, ErrorCode::ChannelNotInvertible, "no singular value above the cutoff");

    InverseChannel out;
    out.ensemble = channel.ensemble;
    out.rank = static_cast<int>(rank);
    out.condition_number = sigma[0] / sigma[rank - 1];
    const Eigen::VectorXd inv_sigma = sigma.head(rank).cwiseInverse();
    out.superoperator = svd.matrixV().leftCols(rank) * inv_sigma.asDiagonal() * svd.matrixU().leftCols(rank).adjoint();
    out.residual = (m * out.superoperator - MatrixXc::Identity(m.rows(), m.cols())).norm();
    return out;
}

std::vector<DenseShadow> shallow_shadows(const MeasurementGroup &group, const InverseChannel &inverse) {
    for (const auto &e : group.entries()) {
        check_ensemble(e.setting(), inverse.ensemble);
    }
    const auto n_shots = static_cast<std::size_t>(group.n_shots());
    const Subsystem sites = Subsystem::range(1, group.n_qubits());
    std::vector<DenseShadow> out(group.entries().size() * n_shots, DenseShadow{MatrixXc(), sites, 1.0});
    parallel_for(group.entries().size(), [&](std::size_t j) {
        const auto shadows = setting_shadows(group[j], inverse);
        for (std::size_t l = 0; l < n_shots; ++l) {
            out[j * n_shots + l].matrix = shadows.shadows[static_cast<std::size_t>(shadows.shot_to_distinct[l])];
        }
    });
    return out;
}

BatchShadowSet shallow_batch_shadows(const MeasurementGroup &group, const InverseChannel &inverse, int n_batches) {
    for (const auto &e : group.entries()) {
        check_ensemble(e.setting(), inverse.ensemble);
    }
    std::vector<MatrixXc> means(group.entries().size());
    parallel_for(means.size(), [&](std::size_t j) {
        const auto shadows = setting_shadows(group[j], inverse);
        const int dim = inverse.dim();
        MatrixXc acc = MatrixXc::Zero(dim, dim);
        for (std::size_t k = 0; k < shadows.shadows.size(); ++k) {
            acc += static_cast<double>(shadows.counts[k]) * shadows.shadows[k];
        }
        means[j] = acc / static_cast<double>(group.n_shots());
    });
    return average_into_batches(means, n_batches, group.n_shots(), Subsystem::range(1, group.n_qubits()));
}

}  // namespace rmkit
