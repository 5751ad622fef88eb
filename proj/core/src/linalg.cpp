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

#include "rmkit/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "rmkit/error.hpp"

namespace rmkit {

double unitarity_error(const MatrixXc &u) {
    if (u.rows() != u.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    const MatrixXc diff = u.adjoint() * u - MatrixXc::Identity(u.rows(), u.cols());
    return diff.cwiseAbs().maxCoeff();
}

bool is_unitary(const MatrixXc &u, double tol) { return unitarity_error(u) < tol; }

MatrixXc kron(const MatrixXc &a, const MatrixXc &b) {
    MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

MatrixXc kron_all(const std::vector<MatrixXc> &factors) {
    MatrixXc out = MatrixXc::Identity(1, 1);
    for (const auto &f : factors) {
        out = kron(out, f);
    }
    return out;
}

std::size_t pow2(int n) {
    require(n >= 0 && n < 63, ErrorCode::TooLarge, "2^" + std::to_string(n) + " does not fit");
    return std::size_t{1} << n;
}

double trace_norm(const MatrixXc &hermitian) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace rmkit
