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

#include "rmkit/sampling.hpp"

#include <cmath>
#include <optional>

#include <Eigen/QR>

#include "rmkit/error.hpp"
#include "rmkit/parallel.hpp"

namespace rmkit {

MatrixXc haar_unitary(int dim, Rng &rng) {
    require(dim >= 1, ErrorCode::InvalidSize, "unitary dimension must be positive");
    const double scale = 1.0 / std::sqrt(2.0);
    MatrixXc ginibre(dim, dim);
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r < dim; ++r) {
            const double re = rng.normal();
            const double im = rng.normal();
            ginibre(r, c) = Complex(re * scale, im * scale);
        }
    }
    Eigen::HouseholderQR<MatrixXc> qr(ginibre);
    MatrixXc q = qr.householderQ();
    const MatrixXc &r = qr.matrixQR();
    for (int c = 0; c < dim; ++c) {
        const Complex d = r(c, c);
        const double mod = std::abs(d);
        q.col(c) *= (mod > 0.0) ? d / mod : Complex(1.0);
    }
    return q;
}

Mat2 haar_unitary_2x2(Rng &rng) { return haar_unitary(2, rng); }

Mat4 haar_unitary_4x4(Rng &rng) { return haar_unitary(4, rng); }

const Mat2 &basis_rotation(PauliBasis basis) {
    static const double h = 1.0 / std::sqrt(2.0);
    static const Mat2 kHadamard = (Mat2() << h, h, h, -h).finished();
    static const Mat2 kHSdag = (Mat2() << h, Complex(0, -h), h, Complex(0, h)).finished();
    static const Mat2 kIdentity = Mat2::Identity();
    switch (basis) {
        case PauliBasis::X: return kHadamard;
        case PauliBasis::Y: return kHSdag;
        case PauliBasis::Z: return kIdentity;
    }
    return kIdentity;
}

LocalUnitarySetting local_unitary_setting(int n_qubits, Rng &rng) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    std::vector<Mat2> unitaries;
    unitaries.reserve(static_cast<std::size_t>(n_qubits));
    for (int i = 0; i < n_qubits; ++i) {
        unitaries.push_back(haar_unitary_2x2(rng));
    }
    return LocalUnitarySetting(std::move(unitaries));
}

LocalUnitarySetting pauli_basis_setting(int n_qubits, Rng &rng) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    static constexpr PauliBasis kBases[] = {PauliBasis::X, PauliBasis::Y, PauliBasis::Z};
    std::vector<Mat2> unitaries;
    unitaries.reserve(static_cast<std::size_t>(n_qubits));
    for (int i = 0; i < n_qubits; ++i) {
        unitaries.push_back(basis_rotation(kBases[rng.below(3)]));
    }
    return LocalUnitarySetting(std::move(unitaries));
}

ShallowCircuitSetting shallow_setting(int n_qubits, int depth, Rng &rng) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    require(depth >= 0, ErrorCode::InvalidArgument, "depth must be non-negative");
    require(depth == 0 || n_qubits >= 2, ErrorCode::InvalidSize, "brickwork circuits need at least two qubits");
    std::vector<Gate> gates;
    for (int layer = 1; layer <= depth; ++layer) {
        const int first = (layer % 2 == 1) ? 1 : 2;
        for (int site = first; site + 1 <= n_qubits; site += 2) {
            gates.push_back(Gate{{site, site + 1}, haar_unitary_4x4(rng)});
        }
    }
    return ShallowCircuitSetting(n_qubits, depth, std::move(gates));
}

Ensemble parse_ensemble(std::string_view name) {
    if (name == "haar") return Ensemble::Haar;
    if (name == "pauli") return Ensemble::Pauli;
    if (name == "computational") return Ensemble::Computational;
    if (name == "shallow") return Ensemble::Shallow;
    fail(ErrorCode::InvalidArgument, "unknown ensemble: " + std::string(name));
}

std::string_view to_string(Ensemble ensemble) {
    switch (ensemble) {
        case Ensemble::Haar: return "haar";
        case Ensemble::Pauli: return "pauli";
        case Ensemble::Computational: return "computational";
        case Ensemble::Shallow: return "shallow";
    }
    return "haar";
}

std::vector<MeasurementSetting> sample_settings(Ensemble ensemble, int n_qubits, int n_settings, RngSeed seed,
                                                int depth) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "qubit count must be positive");
    require(n_settings >= 1, ErrorCode::InvalidSize, "at least one setting is required");
    std::vector<std::optional<MeasurementSetting>> slots(static_cast<std::size_t>(n_settings));
    parallel_for(slots.size(), [&](std::size_t j) {
        Rng rng(seed.substream(j));
        switch (ensemble) {
            case Ensemble::Haar: slots[j] = local_unitary_setting(n_qubits, rng); break;
            case Ensemble::Pauli: slots[j] = pauli_basis_setting(n_qubits, rng); break;
            case Ensemble::Computational: slots[j] = ComputationalBasisSetting(n_qubits); break;
            case Ensemble::Shallow: slots[j] = shallow_setting(n_qubits, depth, rng); break;
        }
    });
    std::vector<MeasurementSetting> out;
    out.reserve(slots.size());
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

}  // namespace rmkit
