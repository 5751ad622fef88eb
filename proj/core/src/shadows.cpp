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

#include "rmkit/shadows.hpp"

#include <cmath>
#include <map>

#include "rmkit/error.hpp"
#include "rmkit/parallel.hpp"

namespace rmkit {
namespace {

void check_calibration(const MeasurementGroup &group, const std::optional<CalibrationVector> &calibration) {
    require(group.all_local(), ErrorCode::UnsupportedSetting,
            "factorized and dense shadows require product-form settings");
    if (calibration) {
        require(calibration->size() == group.n_qubits(), ErrorCode::SizeMismatch,
                "calibration vector length must equal qubit count");
    }
}

// factors[site][bit] for one setting.
std::vector<std::array<Mat2, 2>> setting_factors(const MeasurementSetting &setting,
                                                 const std::optional<CalibrationVector> &calibration) {
    const auto unitaries = local_unitaries(setting);
    std::vector<std::array<Mat2, 2>> out(unitaries.size());
    for (std::size_t i = 0; i < unitaries.size(); ++i) {
        const double g = calibration ? (*calibration)[i] : 1.0;
        out[i] = {shadow_factor(unitaries[i], 0, g), shadow_factor(unitaries[i], 1, g)};
    }
    return out;
}

MatrixXc kron_factors(const std::vector<std::array<Mat2, 2>> &factors, std::span<const std::uint8_t> bits) {
    MatrixXc out = MatrixXc::Identity(1, 1);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        out = kron(out, factors[i][bits[i]]);
    }
    return out;
}

MatrixXc setting_mean_shadow(const MeasurementData &data, const std::optional<CalibrationVector> &calibration) {
    const auto factors = setting_factors(data.setting(), calibration);
    std::map<std::uint64_t, int> counts;
    for (int shot = 0; shot < data.n_shots(); ++shot) {
        ++counts[data.outcomes().shot_index(shot)];
    }
    const auto dim = static_cast<Eigen::Index>(pow2(data.n_qubits()));
    MatrixXc acc = MatrixXc::Zero(dim, dim);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(data.n_qubits()));
    for (const auto &[index, count] : counts) {
        for (int site = 1; site <= data.n_qubits(); ++site) {
            bits[static_cast<std::size_t>(site - 1)] =
                static_cast<std::uint8_t>((index >> (data.n_qubits() - site)) & 1U);
        }
        acc += static_cast<double>(count) * kron_factors(factors, bits);
    }
    return acc / static_cast<double>(data.n_shots());
}

}  // namespace

CalibrationVector::CalibrationVector(std::vector<double> g) : g_(std::move(g)) {
    require(!g_.empty(), ErrorCode::InvalidSize, "calibration vector needs at least one entry");
    for (double v : g_) {
        require(std::isfinite(v) && v >= kCalibrationFloor && v <= kCalibrationCeiling,
                ErrorCode::CalibrationOutOfRange,
                "calibration parameter " + std::to_string(v) + " outside [0.05, 1.2]");
    }
}

CalibrationVector CalibrationVector::ones(int n_qubits) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    return CalibrationVector(std::vector<double>(static_cast<std::size_t>(n_qubits), 1.0));
}

CalibrationVector CalibrationVector::reduced(const Subsystem &sub) const {
    sub.check_within(size());
    std::vector<double> out;
    for (int site : sub.sites()) {
        out.push_back(g_[static_cast<std::size_t>(site - 1)]);
    }
    return CalibrationVector(std::move(out));
}

Mat2 shadow_factor(const Mat2 &u, int bit, double g) {
    // U^dagger |s> is the conjugated row s of U.
    const Eigen::Vector2cd v = u.row(bit).adjoint();
    const Mat2 projector = v * v.adjoint();
    return (3.0 / g) * projector - ((3.0 - g) / (2.0 * g)) * Mat2::Identity();
}

std::vector<FactorizedShadow> factorized_shadows(const MeasurementGroup &group,
                                                 const std::optional<CalibrationVector> &calibration) {
    check_calibration(group, calibration);
    const auto n_shots = static_cast<std::size_t>(group.n_shots());
    const auto n = static_cast<std::size_t>(group.n_qubits());
    std::vector<FactorizedShadow> out(group.entries().size() * n_shots);
    parallel_for(group.entries().size(), [&](std::size_t j) {
        const auto &data = group[j];
        const auto factors = setting_factors(data.setting(), calibration);
        for (std::size_t l = 0; l < n_shots; ++l) {
            auto &shadow = out[j * n_shots + l];
            shadow.factors.resize(n);
            const auto bits = data.outcomes().shot(static_cast<int>(l));
            for (std::size_t i = 0; i < n; ++i) {
                shadow.factors[i] = factors[i][bits[i]];
            }
        }
    });
    return out;
}

DenseShadow to_dense(const FactorizedShadow &shadow) {
    require(shadow.n_qubits() <= kMaxDenseShadowQubits, ErrorCode::TooLargeForDense,
            "dense shadows are limited to 12 qubits");
    MatrixXc out = MatrixXc::Identity(1, 1);
    for (const auto &f : shadow.factors) {
        out = kron(out, f);
    }
    return DenseShadow{std::move(out), Subsystem::range(1, shadow.n_qubits()), shadow.weight};
}

std::vector<DenseShadow> dense_shadows(const MeasurementGroup &group,
                                       const std::optional<CalibrationVector> &calibration) {
    require(group.n_qubits() <= kMaxDenseShadowQubits, ErrorCode::TooLargeForDense,
            "dense shadows are limited to 12 qubits");
    const auto factorized = factorized_shadows(group, calibration);
    std::vector<DenseShadow> out(factorized.size(), DenseShadow{MatrixXc(), Subsystem({1}), 1.0});
    parallel_for(factorized.size(), [&](std::size_t i) { out[i] = to_dense(factorized[i]); });
    return out;
}

std::vector<int> batch_assignment(int n_settings, int n_batches) {
    require(n_batches >= 1, ErrorCode::InvalidArgument, "at least one batch is required");
    require(n_batches <= n_settings, ErrorCode::InvalidArgument, "more batches than settings");
    const int base = n_settings / n_batches;
    const int extra = n_settings % n_batches;
    std::vector<int> assignment;
    assignment.reserve(static_cast<std::size_t>(n_settings));
    for (int b = 0; b < n_batches; ++b) {
        const int size = base + (b >= n_batches - extra ? 1 : 0);
        assignment.insert(assignment.end(), static_cast<std::size_t>(size), b);
    }
    return assignment;
}

BatchShadowSet average_into_batches(std::span<const MatrixXc> setting_means, int n_batches, int n_shots,
                                    const Subsystem &sites) {
    require(!setting_means.empty(), ErrorCode::InvalidSize, "no settings to batch");
    BatchShadowSet out;
    out.batch_of_setting = batch_assignment(static_cast<int>(setting_means.size()), n_batches);
    out.n_shots = n_shots;
    const auto dim = setting_means.front().rows();
    std::vector<MatrixXc> sums(static_cast<std::size_t>(n_batches), MatrixXc::Zero(dim, dim));
    std::vector<int> sizes(static_cast<std::size_t>(n_batches), 0);
    for (std::size_t j = 0; j < setting_means.size(); ++j) {
        const auto b = static_cast<std::size_t>(out.batch_of_setting[j]);
        sums[b] += setting_means[j];
        ++sizes[b];
    }
    out.batches.reserve(sums.size());
    for (std::size_t b = 0; b < sums.size(); ++b) {
        out.batches.push_back(DenseShadow{sums[b] / static_cast<double>(sizes[b]), sites, 1.0});
    }
    return out;
}

BatchShadowSet dense_batch_shadows(const MeasurementGroup &group, int n_batches,
                                   const std::optional<CalibrationVector> &calibration) {
    check_calibration(group, calibration);
    require(group.n_qubits() <= kMaxDenseShadowQubits, ErrorCode::TooLargeForDense,
            "dense shadows are limited to 12 qubits");
    std::vector<MatrixXc> means(group.entries().size());
    parallel_for(means.size(), [&](std::size_t j) { means[j] = setting_mean_shadow(group[j], calibration); });
    return average_into_batches(means, n_batches, group.n_shots(), Subsystem::range(1, group.n_qubits()));
}

CalibrationVector calibration_vector(const QuantumState &reference, const MeasurementGroup &calibration_group,
                                     CalibrationEstimator estimator) {
    const int n = n_qubits(reference);
    require(n == calibration_group.n_qubits(), ErrorCode::SizeMismatch,
            "reference state and calibration group sizes differ");
    double weight_on_zero = 0.0;
    if (const auto *psi = std::get_if<PureStateDense>(&reference)) {
        weight_on_zero = std::norm(psi->amplitudes()[0]);
    } else if (const auto *rho = std::get_if<DensityMatrixDense>(&reference)) {
        weight_on_zero = rho->matrix()(0, 0).real();
    } else {
        const auto &mps = std::get<MatrixProductState>(reference);
        const std::vector<std::uint8_t> zeros(static_cast<std::size_t>(n), 0);
        const double norm = mps.norm();
        weight_on_zero = std::norm(mps.amplitude(zeros)) / (norm * norm);
    }
    require(std::abs(weight_on_zero - 1.0) < 1e-10, ErrorCode::UnsupportedReferenceState,
            "calibration is only supported for the reference state |0...0>");
    require(calibration_group.all_local(), ErrorCode::UnsupportedSetting, "calibration requires product-form settings");

    const auto sites = static_cast<std::size_t>(n);
    if (estimator == CalibrationEstimator::SnapshotMean) {
        std::vector<double> sums(sites, 0.0);
        for (const auto &data : calibration_group.entries()) {
            const auto unitaries = local_unitaries(data.setting());
            for (int shot = 0; shot < data.n_shots(); ++shot) {
                const auto bits = data.outcomes().shot(shot);
                for (std::size_t i = 0; i < sites; ++i) {
                    // tr(Z (3 v v^dagger - I)) = 3 (|v_0|^2 - |v_1|^2), v = U^dagger|s>.
                    const Eigen::Vector2cd v = unitaries[i].row(bits[i]).adjoint();
                    sums[i] += 3.0 * (std::norm(v[0]) - std::norm(v[1]));
                }
            }
        }
        const double count = static_cast<double>(calibration_group.n_settings()) * calibration_group.n_shots();
        for (auto &s : sums) {
            s /= count;
        }
        return CalibrationVector(std::move(sums));
    }

    std::vector<double> cross(sites, 0.0);
    std::vector<double> square(sites, 0.0);
    for (const auto &data : calibration_group.entries()) {
        const auto unitaries = local_unitaries(data.setting());
        std::vector<int> zeros(sites, 0);
        for (int shot = 0; shot < data.n_shots(); ++shot) {
            const auto bits = data.outcomes().shot(shot);
            for (std::size_t i = 0; i < sites; ++i) {
                zeros[i] += bits[i] == 0 ? 1 : 0;
            }
        }
        for (std::size_t i = 0; i < sites; ++i) {
            const double c = std::norm(unitaries[i](0, 0)) - 0.5;
            const double f = static_cast<double>(zeros[i]) / data.n_shots() - 0.5;
            cross[i] += c * f;
            square[i] += c * c;
        }
    }
    std::vector<double> g(sites);
    for (std::size_t i = 0; i < sites; ++i) {
        require(square[i] > 1e-12, ErrorCode::CalibrationOutOfRange,
                "calibration settings do not resolve qubit " + std::to_string(i + 1) +
                    " (no rotation with |U_00|^2 != 1/2)");
        g[i] = cross[i] / square[i];
    }
    return CalibrationVector(std::move(g));
}

FactorizedShadow reduce_shadow(const FactorizedShadow &shadow, const Subsystem &sub) {
    sub.check_within(shadow.n_qubits());
    FactorizedShadow out;
    out.weight = shadow.weight;
    for (int site : sub.sites()) {
        out.factors.push_back(shadow.factors[static_cast<std::size_t>(site - 1)]);
    }
    return out;
}

}  // namespace rmkit
