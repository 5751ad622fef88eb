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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace rmkit {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Tolerance for unitarity checks, max-norm of U^dagger U - I.
inline constexpr double kUnitaryTolerance = 1e-12;

/// Largest |(U^dagger U - I)_ij|.
double unitarity_error(const MatrixXc &u);

bool is_unitary(const MatrixXc &u, double tol = kUnitaryTolerance);

/// Kronecker product; the first argument owns the most significant index bits.
MatrixXc kron(const MatrixXc &a, const MatrixXc &b);

/// Kronecker product of a list of matrices, in order.
MatrixXc kron_all(const std::vector<MatrixXc> &factors);

/// 2^n, with n checked against the platform word size.
std::size_t pow2(int n);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const MatrixXc &hermitian);

}  // namespace rmkit
