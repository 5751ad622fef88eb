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

#include "gate_kernels.hpp"

#include "rmkit/error.hpp"

namespace rmkit::detail {

void apply_gate_to_columns(Eigen::Ref<MatrixXc> m, int n_qubits, const Gate &gate) {
    const std::size_t dim = pow2(n_qubits);
    require(static_cast<std::size_t>(m.rows()) == dim, ErrorCode::SizeMismatch, "operand does not span 2^N rows");
    if (gate.sites.size() == 1) {
        const std::size_t stride = pow2(n_qubits - gate.sites[0]);
        const Mat2 u = gate.unitary;
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            for (std::size_t base = 0; base < dim; ++base) {
                if (base & stride) {
                    continue;
                }
                const auto i0 = static_cast<Eigen::Index>(base);
                const auto i1 = static_cast<Eigen::Index>(base | stride);
                const Complex a = m(i0, c);
                const Complex b = m(i1, c);
                m(i0, c) = u(0, 0) * a + u(0, 1) * b;
                m(i1, c) = u(1, 0) * a + u(1, 1) * b;
            }
        }
        return;
    }
    // sites[0] is the most significant bit of the 4x4 gate index.
    const std::size_t s0 = pow2(n_qubits - gate.sites[0]);
    const std::size_t s1 = pow2(n_qubits - gate.sites[1]);
    const std::size_t offsets[4] = {0, s1, s0, s0 | s1};
    const Mat4 u = gate.unitary;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (std::size_t base = 0; base < dim; ++base) {
            if ((base & s0) || (base & s1)) {
                continue;
            }
            Eigen::Vector4cd in;
            for (int k = 0; k < 4; ++k) {
                in[k] = m(static_cast<Eigen::Index>(base | offsets[k]), c);
            }
            const Eigen::Vector4cd out = u * in;
            for (int k = 0; k < 4; ++k) {
                m(static_cast<Eigen::Index>(base | offsets[k]), c) = out[k];
            }
        }
    }
}

void apply_setting_to_columns(Eigen::Ref<MatrixXc> m, const MeasurementSetting &setting) {
    const int n = n_qubits(setting);
    if (std::holds_alternative<ComputationalBasisSetting>(setting)) {
        return;
    }
    if (const auto *local = std::get_if<LocalUnitarySetting>(&setting)) {
        for (int site = 1; site <= n; ++site) {
            apply_gate_to_columns(m, n, Gate{{site}, local->unitary(site)});
        }
        return;
    }
    for (const auto &g : std::get<ShallowCircuitSetting>(setting).gates()) {
        apply_gate_to_columns(m, n, g);
    }
}

}  // namespace rmkit::detail
