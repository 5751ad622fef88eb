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

#include "rmkit/estimators.hpp"

#include <bit>
#include <cmath>

#include "rmkit/error.hpp"
#include "rmkit/parallel.hpp"
#include "rmkit/stats.hpp"

namespace rmkit {
namespace {

Complex factor_trace(Pauli p, const Mat2 &f) {
    switch (p) {
        case Pauli::I: return f(0, 0) + f(1, 1);
        case Pauli::X: return f(0, 1) + f(1, 0);
        case Pauli::Y: return Complex(0, 1) * (f(0, 1) - f(1, 0));
        case Pauli::Z: return f(0, 0) - f(1, 1);
    }
    return 0.0;
}

EstimateWithError summarize(const std::vector<double> &values, bool compute_sem, int block_size) {
    EstimateWithError out;
    out.value = mean(values);
    out.n_samples = values.size();
    if (compute_sem) {
        out.sem = blocked_sem(values, block_size);
    }
    return out;
}

// Bit strings packed into 64-bit words so Hamming distances are popcounts.
struct PackedShots {
    int words = 0;
    std::vector<std::uint64_t> data;

    explicit PackedShots(const Outcomes &outcomes) {
        const int n = outcomes.n_qubits();
        words = (n + 63) / 64;
        data.assign(static_cast<std::size_t>(outcomes.n_shots()) * static_cast<std::size_t>(words), 0);
        for (int shot = 0; shot < outcomes.n_shots(); ++shot) {
            const auto bits = outcomes.shot(shot);
            for (int i = 0; i < n; ++i) {
                if (bits[static_cast<std::size_t>(i)]) {
                    data[static_cast<std::size_t>(shot) * static_cast<std::size_t>(words) +
                         static_cast<std::size_t>(i / 64)] |= std::uint64_t{1} << (i % 64);
                }
            }
        }
    }

    const std::uint64_t *shot(int i) const {
        return data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(words);
    }
};

int hamming(const std::uint64_t *a, const std::uint64_t *b, int words) {
    int d = 0;
    for (int w = 0; w < words; ++w) {
        d += std::popcount(a[w] ^ b[w]);
    }
    return d;
}

// (-2)^(-D) for D = 0..n.
std::vector<double> hamming_kernel(int n) {
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    w[0] = 1.0;
    for (int d = 1; d <= n; ++d) {
        w[static_cast<std::size_t>(d)] = w[static_cast<std::size_t>(d - 1)] * -0.5;
    }
    return w;
}

EstimateWithError over_settings(const std::vector<double> &per_setting, bool compute_sem) {
    EstimateWithError out;
    out.value = mean(per_setting);
    out.n_samples = per_setting.size();
    if (compute_sem) {
        out.sem = sem(per_setting);
    }
    return out;
}

bool is_computational(const MeasurementSetting &setting) {
    if (std::holds_alternative<ComputationalBasisSetting>(setting)) {
        return true;
    }
    if (const auto *local = std::get_if<LocalUnitarySetting>(&setting)) {
        for (const auto &u : local->unitaries()) {
            if ((u - Mat2::Identity()).cwiseAbs().maxCoeff() > kUnitaryTolerance) {
                return false;
            }
        }
        return true;
    }
    return std::get<ShallowCircuitSetting>(setting).gates().empty();
}

}  // namespace

double shadow_expectation(const PauliObservable &obs, const FactorizedShadow &shadow) {
    require(obs.n_qubits() == shadow.n_qubits(), ErrorCode::SizeMismatch, "observable and shadow sizes differ");
    double total = 0.0;
    for (const auto &term : obs.terms()) {
        Complex product = 1.0;
        for (std::size_t i = 0; i < term.letters.size(); ++i) {
            product *= factor_trace(term.letters[i], shadow.factors[i]);
        }
        total += term.coefficient * product.real();
    }
    return total;
}

double shadow_expectation(const PauliObservable &obs, const MatrixXc &shadow) {
    const int n = obs.n_qubits();
    require(shadow.rows() == static_cast<Eigen::Index>(pow2(n)) && shadow.cols() == shadow.rows(),
            ErrorCode::SizeMismatch, "observable and shadow sizes differ");
    const std::size_t dim = pow2(n);
    double total = 0.0;
    for (const auto &term : obs.terms()) {
        std::size_t flip = 0;
        for (int site = 1; site <= n; ++site) {
            const Pauli p = term.letters[static_cast<std::size_t>(site - 1)];
            if (p == Pauli::X || p == Pauli::Y) {
                flip |= std::size_t{1} << (n - site);
            }
        }
        // P|r> = phase(r) |r xor flip>, so tr(P M) = sum_r phase(r) M(r, r xor flip).
        Complex acc = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            Complex phase = 1.0;
            for (int site = 1; site <= n; ++site) {
                const bool bit = (r >> (n - site)) & 1U;
                switch (term.letters[static_cast<std::size_t>(site - 1)]) {
                    case Pauli::Y: phase *= bit ? Complex(0, -1) : Complex(0, 1); break;
                    case Pauli::Z: phase *= bit ? -1.0 : 1.0; break;
                    default: break;
                }
            }
            acc += phase * shadow(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ flip));
        }
        total += term.coefficient * acc.real();
    }
    return total;
}

EstimateWithError expect_shadow(const PauliObservable &obs, std::span<const FactorizedShadow> shadows, bool compute_sem,
                                int block_size) {
    require(!shadows.empty(), ErrorCode::NotEnoughSamples, "no shadows given");
    std::vector<double> values(shadows.size());
    parallel_for(shadows.size(), [&](std::size_t i) { values[i] = shadow_expectation(obs, shadows[i]); });
    return summarize(values, compute_sem, block_size);
}

EstimateWithError expect_shadow(const PauliObservable &obs, std::span<const DenseShadow> shadows, bool compute_sem,
                                int block_size) {
    require(!shadows.empty(), ErrorCode::NotEnoughSamples, "no shadows given");
    std::vector<double> values(shadows.size());
    parallel_for(shadows.size(), [&](std::size_t i) { values[i] = shadow_expectation(obs, shadows[i].matrix); });
    return summarize(values, compute_sem, block_size);
}

std::vector<EstimateWithError> trace_moments(const BatchShadowSet &batches, std::span<const int> orders,
                                             bool compute_sem) {
    require(batches.n_batches() >= 1, ErrorCode::NotEnoughBatches, "no batch shadows given");
    std::vector<EstimateWithError> out;
    const auto n_batches = static_cast<std::size_t>(batches.n_batches());
    if (compute_sem) {
        const auto jk = jackknife_moments(batches, orders);
        for (const auto &r : jk.results) {
            out.push_back(EstimateWithError{r.raw_estimate, r.standard_error(), n_batches});
        }
        return out;
    }
    std::vector<MatrixXc> matrices;
    matrices.reserve(n_batches);
    for (const auto &b : batches.batches) {
        matrices.push_back(b.matrix);
    }
    for (const auto &t : trace_moment_terms(matrices, orders)) {
        out.push_back(EstimateWithError{t.estimate(), std::nullopt, n_batches});
    }
    return out;
}

EstimateWithError purity_direct(const MeasurementGroup &group, bool compute_sem) {
    require(group.all_local(), ErrorCode::UnsupportedSetting, "direct purity requires product-form settings");
    const int n_shots = group.n_shots();
    require(n_shots >= 2, ErrorCode::NotEnoughShots, "direct purity needs at least two shots per setting");
    const int n = group.n_qubits();
    const auto kernel = hamming_kernel(n);
    const double dim = std::ldexp(1.0, n);
    std::vector<double> per_setting(group.entries().size());
    parallel_for(per_setting.size(), [&](std::size_t j) {
        const PackedShots shots(group[j].outcomes());
        double acc = 0.0;
        for (int a = 0; a < n_shots; ++a) {
            for (int b = a + 1; b < n_shots; ++b) {
                acc += kernel[static_cast<std::size_t>(hamming(shots.shot(a), shots.shot(b), shots.words))];
            }
        }
        per_setting[j] = dim * 2.0 * acc / (static_cast<double>(n_shots) * (n_shots - 1));
    });
    return over_settings(per_setting, compute_sem);
}

EstimateWithError overlap_direct(const MeasurementGroup &first, const MeasurementGroup &second, bool compute_sem) {
    require(first.all_local() && second.all_local(), ErrorCode::UnsupportedSetting,
            "direct overlap requires product-form settings");
    require(first.n_qubits() == second.n_qubits() && first.n_settings() == second.n_settings(),
            ErrorCode::SettingsMismatch, "groups must share qubit count and number of settings");
    for (int j = 0; j < first.n_settings(); ++j) {
        require(first[static_cast<std::size_t>(j)].setting() == second[static_cast<std::size_t>(j)].setting(),
                ErrorCode::SettingsMismatch, "setting " + std::to_string(j + 1) + " differs between the groups");
    }
    const int n = first.n_qubits();
    const auto kernel = hamming_kernel(n);
    const double dim = std::ldexp(1.0, n);
    std::vector<double> per_setting(first.entries().size());
    parallel_for(per_setting.size(), [&](std::size_t j) {
        const PackedShots a(first[j].outcomes());
        const PackedShots b(second[j].outcomes());
        const int na = first[j].n_shots();
        const int nb = second[j].n_shots();
        double acc = 0.0;
        for (int x = 0; x < na; ++x) {
            for (int y = 0; y < nb; ++y) {
                acc += kernel[static_cast<std::size_t>(hamming(a.shot(x), b.shot(y), a.words))];
            }
        }
        per_setting[j] = dim * acc / (static_cast<double>(na) * nb);
    });
    return over_settings(per_setting, compute_sem);
}

EstimateWithError cross_platform_fidelity(const MeasurementGroup &first, const MeasurementGroup &second,
                                          bool compute_sem) {
    const auto overlap = overlap_direct(first, second, compute_sem);
    const auto p1 = purity_direct(first, compute_sem);
    const auto p2 = purity_direct(second, compute_sem);
    const auto &denominator = (p1.value >= p2.value) ? p1 : p2;
    require(denominator.value > 0.0, ErrorCode::InvalidArgument, "purity estimates are not positive");
    EstimateWithError out;
    out.value = overlap.value / denominator.value;
    out.n_samples = overlap.n_samples;
    if (compute_sem) {
        const double a = *overlap.sem / denominator.value;
        const double b = overlap.value * *denominator.sem / (denominator.value * denominator.value);
        out.sem = std::sqrt(a * a + b * b);
    }
    return out;
}

double xeb(const QuantumState &ideal, const MeasurementData &data) {
    require(is_computational(data.setting()), ErrorCode::UnsupportedSetting,
            "XEB needs computational-basis measurement data");
    require(!std::holds_alternative<DensityMatrixDense>(ideal), ErrorCode::InvalidArgument,
            "the ideal state must be pure (dense vector or MPS)");
    const int n = n_qubits(ideal);
    require(n == data.n_qubits(), ErrorCode::SizeMismatch, "ideal state and data sizes differ");
    double sum = 0.0;
    if (const auto *psi = std::get_if<PureStateDense>(&ideal)) {
        for (int shot = 0; shot < data.n_shots(); ++shot) {
            sum += std::norm(psi->amplitudes()[static_cast<Eigen::Index>(data.outcomes().shot_index(shot))]);
        }
    } else {
        const auto &mps = std::get<MatrixProductState>(ideal);
        const double norm = mps.norm();
        for (int shot = 0; shot < data.n_shots(); ++shot) {
            sum += std::norm(mps.amplitude(data.outcomes().shot(shot))) / (norm * norm);
        }
    }
    return std::ldexp(sum / data.n_shots(), n) - 1.0;
}

double self_xeb(const QuantumState &ideal) {
    require(!std::holds_alternative<DensityMatrixDense>(ideal), ErrorCode::InvalidArgument,
            "the ideal state must be pure (dense vector or MPS)");
    const int n = n_qubits(ideal);
    require(n <= kMaxContractQubits, ErrorCode::TooLarge, "self-XEB is evaluated densely for N <= 24");
    Eigen::VectorXd probs;
    if (const auto *psi = std::get_if<PureStateDense>(&ideal)) {
        probs = psi->amplitudes().cwiseAbs2();
    } else {
        probs = std::get<MatrixProductState>(ideal).to_dense().cwiseAbs2();
        probs /= probs.sum();
    }
    return std::ldexp(probs.squaredNorm(), n) - 1.0;
}

}  // namespace rmkit
