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
#include <vector>

#include "rmkit/core.hpp"
#include "rmkit/state.hpp"

namespace rmkit {

inline constexpr double kCalibrationFloor = 0.05;
inline constexpr double kCalibrationCeiling = 1.2;
/// Dense shadows are built for at most this many qubits.
inline constexpr int kMaxDenseShadowQubits = 12;

/// Per-qubit depolarization parameters G_i of the twirled readout noise.
class CalibrationVector {
  public:
    /// Throws CalibrationOutOfRange unless every G_i lies in [0.05, 1.2].
    explicit CalibrationVector(std::vector<double> g);

    static CalibrationVector ones(int n_qubits);

    int size() const noexcept { return static_cast<int>(g_.size()); }
    const std::vector<double> &values() const noexcept { return g_; }
    double operator[](std::size_t i) const { return g_[i]; }

    CalibrationVector reduced(const Subsystem &sub) const;

  private:
    std::vector<double> g_;
};

/// Tensor product of single-site snapshot factors.
struct FactorizedShadow {
    std::vector<Mat2> factors;
    /// Reserved; always 1 and unused by the estimators.
    double weight = 1.0;

    int n_qubits() const noexcept { return static_cast<int>(factors.size()); }
};

struct DenseShadow {
    MatrixXc matrix;
    Subsystem sites;
    double weight = 1.0;

    int n_qubits() const noexcept { return sites.size(); }
};

/// Batch-averaged dense shadows. Settings are assigned to batches
/// contiguously by index.
struct BatchShadowSet {
    std::vector<DenseShadow> batches;
    /// batch_of_setting[j] is the batch holding setting j.
    std::vector<int> batch_of_setting;
    int n_shots = 0;

    int n_batches() const noexcept { return static_cast<int>(batches.size()); }
    int n_settings() const noexcept { return static_cast<int>(batch_of_setting.size()); }
    int n_qubits() const { return batches.front().n_qubits(); }
};

/// (3/G) U^dagger|s><s|U - ((3 - G)/(2G)) I. With G = 1 this is the standard
/// local-shadow factor 3 U^dagger|s><s|U - I.
Mat2 shadow_factor(const Mat2 &u, int bit, double g = 1.0);

/// One shadow per (setting, shot), ordered setting-major.
std::vector<FactorizedShadow> factorized_shadows(const MeasurementGroup &group,
                                                 const std::optional<CalibrationVector> &calibration = std::nullopt);

/// Kronecker product of the factors; the shadow covers sites 1..N.
DenseShadow to_dense(const FactorizedShadow &shadow);

/// One dense shadow per (setting, shot). N <= 12.
std::vector<DenseShadow> dense_shadows(const MeasurementGroup &group,
                                       const std::optional<CalibrationVector> &calibration = std::nullopt);

/// Contiguous partition of n_settings into n_batches. When n_batches does not
/// divide n_settings the last (n_settings mod n_batches) batches get one extra
/// setting.
std::vector<int> batch_assignment(int n_settings, int n_batches);

/// Averages per-setting mean shadows (each over n_shots snapshots) into batches.
BatchShadowSet average_into_batches(std::span<const MatrixXc> setting_means, int n_batches, int n_shots,
                                    const Subsystem &sites);

/// n_batches batch shadows of a product-form group. N <= 12.
BatchShadowSet dense_batch_shadows(const MeasurementGroup &group, int n_batches,
                                   const std::optional<CalibrationVector> &calibration = std::nullopt);

enum class CalibrationEstimator {
    /// Least-squares fit of the per-setting frequency of bit 0 against the
    /// ideal Born probability: P(0|U) - 1/2 = G (|U_00|^2 - 1/2). Only shot
    /// noise enters, so it is far less noisy than the snapshot mean.
    BornRegression,
    /// Mean of tr(Z rho_i) over all standard snapshots.
    SnapshotMean,
};

/// Per-qubit G_i from a calibration group measured on |0...0>.
CalibrationVector calibration_vector(const QuantumState &reference, const MeasurementGroup &calibration_group,
                                     CalibrationEstimator estimator = CalibrationEstimator::BornRegression);

/// Keeps the factors of the listed sites. Valid because every factor has unit trace.
FactorizedShadow reduce_shadow(const FactorizedShadow &shadow, const Subsystem &sub);

}  // namespace rmkit
