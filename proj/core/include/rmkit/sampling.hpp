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

namespace rmkit {

/// Haar-distributed element of U(dim): QR of a complex Ginibre matrix with
/// the phases of R's diagonal moved into Q.
MatrixXc haar_unitary(int dim, Rng &rng);
Mat2 haar_unitary_2x2(Rng &rng);
Mat4 haar_unitary_4x4(Rng &rng);

enum class PauliBasis { X, Y, Z };

/// Rotation taking the eigenbasis of the given Pauli to the computational
/// basis: X -> H, Y -> H S^dagger, Z -> I.
const Mat2 &basis_rotation(PauliBasis basis);

LocalUnitarySetting local_unitary_setting(int n_qubits, Rng &rng);

/// Each site measured in a uniformly drawn X, Y or Z basis.
LocalUnitarySetting pauli_basis_setting(int n_qubits, Rng &rng);

/// Brickwork circuit of Haar U(4) gates. Layer d (1-based) covers pairs
/// (1,2),(3,4),... when d is odd and (2,3),(4,5),... when d is even.
ShallowCircuitSetting shallow_setting(int n_qubits, int depth, Rng &rng);

enum class Ensemble { Haar, Pauli, Computational, Shallow };

Ensemble parse_ensemble(std::string_view name);
std::string_view to_string(Ensemble ensemble);

/// n_settings settings; setting j is drawn from seed.substream(j), so the
/// result does not depend on the thread count.
std::vector<MeasurementSetting> sample_settings(Ensemble ensemble, int n_qubits, int n_settings, RngSeed seed,
                                                int depth = 0);

}  // namespace rmkit
