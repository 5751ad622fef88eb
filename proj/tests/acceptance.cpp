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

// Acceptance checks. One PASS/FAIL line per criterion; `--only N` runs a
// single criterion (used by ctest), no argument runs all of them.

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rmkit/rmkit.hpp"

using namespace rmkit;

namespace {

constexpr std::uint64_t kSeed = 2026;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

struct QuietWarnings {
    std::function<void(std::string_view)> previous = set_warning_handler({});
    ~QuietWarnings() { set_warning_handler(std::move(previous)); }
};

// Fifteen non-identity two-site Pauli observables on sites {1,4} of a random
// N=50, chi=2 MPS; at least 13 within two standard errors; under 5 minutes.
Outcome pauli_coverage_mps50() {
    const auto start = Clock::now();
    const int n = 50;
    Rng state_rng(RngSeed{kSeed, 100});
    const auto mps = random_mps(n, 2, state_rng);
    const auto settings = sample_settings(Ensemble::Haar, n, 200, RngSeed{kSeed, 101});
    const auto group = simulate_group(mps, settings, 100, std::nullopt, RngSeed{kSeed, 102});
    const Subsystem sites({1, 4});
    const auto reduced = reduce_to_subsystem(group, sites);
    const auto shadows = factorized_shadows(reduced);

    int inside = 0;
    std::ostringstream misses;
    const std::string letters = "IXYZ";
    for (char a : letters) {
        for (char b : letters) {
            if (a == 'I' && b == 'I') continue;
            const std::string two{a, b};
            const auto est = expect_shadow(PauliObservable::parse(two), shadows, true, reduced.n_shots());
            std::vector<MatrixXc> ops(n, MatrixXc::Identity(2, 2));
            ops[0] = oracle::pauli(a);
            ops[3] = oracle::pauli(b);
            const double exact = oracle::mps_expectation(mps, ops);
            if (std::abs(est.value - exact) <= 2.0 * *est.sem) {
                ++inside;
            } else {
                misses << " " << two;
            }
        }
    }
    const double elapsed = seconds_since(start);
    Outcome out;
    out.pass = inside >= 13 && elapsed <= 300.0;
    out.detail = std::to_string(inside) + "/15 within 2σ" +
                 (misses.str().empty() ? "" : " (outside:" + misses.str() + ")") + ", " + fmt(elapsed, 3) + " s";
    return out;
}

// GHZ(5) with random readout depolarization (mean 0.1, sd 0.02): robust
// batch-shadow purities cover the ideal purity for every prefix subsystem;
// the uncorrected full-system purity sits more than 2σ below it; under 2 minutes.
Outcome robust_purity_ghz5() {
    const auto start = Clock::now();
    QuietWarnings quiet;
    const int n = 5;
    Rng noise_rng(RngSeed{kSeed, 200});
    const auto noise = NoiseModel::random(n, 0.1, 0.02, noise_rng);
    const auto cal_settings = sample_settings(Ensemble::Haar, n, 200, RngSeed{kSeed, 201});
    const auto cal = simulate_group(product_zero(n), cal_settings, 100, noise, RngSeed{kSeed, 202});
    const auto settings = sample_settings(Ensemble::Haar, n, 200, RngSeed{kSeed, 203});
    const auto ghz = ghz_state(n);
    const auto data = simulate_group(ghz, settings, 100, noise, RngSeed{kSeed, 204});
    const auto g = calibration_vector(product_zero(n), cal);
    const MatrixXc rho = oracle::density(ghz);
    const int orders[] = {2};

    Outcome out{true, ""};
    std::ostringstream detail;
    for (int size = 1; size <= n; ++size) {
        const auto sub = Subsystem::range(1, size);
        std::vector<int> keep(sub.sites());
        const MatrixXc reduced_rho = oracle::partial_trace(rho, n, keep);
        const double exact = (reduced_rho * reduced_rho).trace().real();
        const auto est =
            trace_moments(dense_batch_shadows(reduce_to_subsystem(data, sub), 10, g.reduced(sub)), orders, true)[0];
        const bool ok = std::abs(est.value - exact) <= 2.0 * *est.sem;
        out.pass = out.pass && ok;
        detail << "i=" << size << ":" << fmt(est.value, 3) << "±" << fmt(2.0 * *est.sem, 2) << (ok ? "" : "(miss)")
               << " ";
    }
    const auto raw = trace_moments(dense_batch_shadows(data, 10), orders, true)[0];
    const bool biased = 1.0 - raw.value > 2.0 * *raw.sem;
    const double elapsed = seconds_since(start);
    out.pass = out.pass && biased && elapsed <= 120.0;
    detail << "| uncorrected i=5: " << fmt(raw.value, 3) << "±" << fmt(2.0 * *raw.sem, 2)
           << (biased ? " below 1" : " NOT below 1") << ", " << fmt(elapsed, 3) << " s";
    out.detail = detail.str();
    return out;
}

// 4-qubit random mixed state, N_U=200, N_M=100, N_B=8: p2..p5 within 2σ_JK of
// the exact moments, and jackknife coverage over 100 seeds in [88%, 99%].
Outcome moment_coverage_mixed4() {
    QuietWarnings quiet;
    const int n = 4;
    const int orders[] = {2, 3, 4, 5};
    std::map<int, int> covered;
    bool first_ok = true;
    std::ostringstream detail;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        Rng rng(RngSeed{kSeed + rep, 300});
        const auto rho = DensityMatrixDense::random(n, 2, rng);
        const auto settings = sample_settings(Ensemble::Haar, n, 200, RngSeed{kSeed + rep, 301});
        const auto group = simulate_group(rho, settings, 100, std::nullopt, RngSeed{kSeed + rep, 302});
        const auto est = trace_moments(dense_batch_shadows(group, 8), orders, true);
        MatrixXc power = rho.matrix();
        for (std::size_t i = 0; i < 4; ++i) {
            power = power * rho.matrix();
            const double exact = power.trace().real();
            const bool ok = std::abs(est[i].value - exact) <= 2.0 * *est[i].sem;
            covered[orders[i]] += ok ? 1 : 0;
            if (rep == 0) {
                first_ok = first_ok && ok;
                detail << "p" << orders[i] << "=" << fmt(est[i].value, 3) << " vs " << fmt(exact, 3) << " ";
            }
        }
    }
    bool coverage_ok = true;
    detail << "| coverage";
    for (const auto &[k, c] : covered) {
        coverage_ok = coverage_ok && c >= 88 && c <= 99;
        detail << " p" << k << ":" << c << "%";
    }
    return {first_ok && coverage_ok, detail.str()};
}

BatchShadowSet sample_batches(int n_batches, std::uint64_t stream) {
    Rng rng(RngSeed{kSeed, stream});
    const auto rho = DensityMatrixDense::random(3, 3, rng);
    const auto settings = sample_settings(Ensemble::Haar, 3, 120, RngSeed{kSeed, stream + 1});
    const auto group = simulate_group(rho, settings, 100, std::nullopt, RngSeed{kSeed, stream + 2});
    return dense_batch_shadows(group, n_batches);
}

// trace_moments equals ordered-tuple enumeration for N_B in 3..6, k in 2..4.
Outcome moments_match_enumeration() {
    double worst = 0.0;
    int cases = 0;
    for (int nb = 3; nb <= 6; ++nb) {
        const auto batches = sample_batches(nb, 400 + static_cast<std::uint64_t>(nb) * 10);
        std::vector<MatrixXc> mats;
        for (const auto &b : batches.batches) mats.push_back(b.matrix);
        for (int k = 2; k <= std::min(4, nb); ++k) {
            const int orders[] = {k};
            const double fast = trace_moments(batches, orders)[0].value;
            worst = std::max(worst, std::abs(fast - oracle::moment_by_enumeration(mats, k)));
            ++cases;
        }
    }
    return {worst <= 1e-12, std::to_string(cases) + " cases, max |diff| = " + fmt(worst, 3)};
}

std::vector<MatrixXc> perturbed_states(int count, int n_qubits, std::uint64_t stream) {
    Rng rng(RngSeed{kSeed, stream});
    std::vector<MatrixXc> out;
    for (int i = 0; i < count; ++i) {
        const int dim = 1 << n_qubits;
        MatrixXc m = DensityMatrixDense::random(n_qubits, dim, rng).matrix();
        m += 0.1 * oracle::random_hermitian_unit_trace(dim, rng) - 0.1 / dim * MatrixXc::Identity(dim, dim);
        out.push_back(m);
    }
    return out;
}

template <class F>
double min_time(F &&f, int repeats, int inner) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        for (int i = 0; i < inner; ++i) f();
        best = std::min(best, seconds_since(start) / inner);
    }
    return best;
}

// Cached leave-one-out equals from-scratch recomputation (N_B <= 8, k <= 4);
// the cached jackknife costs at most twice one full U-statistic evaluation.
Outcome jackknife_cache() {
    QuietWarnings quiet;
    double worst = 0.0;
    for (int nb = 3; nb <= 8; ++nb) {
        const auto mats = perturbed_states(nb, 2, 500 + static_cast<std::uint64_t>(nb));
        for (int k = 2; k <= std::min(4, nb - 1); ++k) {
            const int orders[] = {k};
            const auto terms = trace_moment_terms(mats, orders)[0];
            for (int i = 0; i < nb; ++i) {
                std::vector<MatrixXc> rest;
                for (int j = 0; j < nb; ++j)
                    if (j != i) rest.push_back(mats[static_cast<std::size_t>(j)]);
                worst = std::max(worst, std::abs(terms.leave_one_out(i) - oracle::moment_by_enumeration(rest, k)));
            }
        }
    }

    const auto mats = perturbed_states(8, 4, 590);
    BatchShadowSet set;
    for (const auto &m : mats) set.batches.push_back(DenseShadow{m, Subsystem::range(1, 4), 1.0});
    set.batch_of_setting = batch_assignment(8, 8);
    set.n_shots = 1;
    const int orders[] = {4};
    volatile double sink = 0.0;
    const double full = min_time([&] { sink = sink + trace_moment(mats, 4); }, 30, 20);
    const double cached = min_time([&] { sink = sink + jackknife_moments(set, orders).results[0].variance; }, 30, 20);
    const double ratio = cached / full;
    return {worst <= 1e-12 && ratio <= 2.0, "max |loo - recompute| = " + fmt(worst, 3) +
                                                ", jackknife/full time = " + fmt(ratio, 3) + " (N_B=8, k=4, 16x16)"};
}

// Largest |mean - target| / (sd / sqrt(K)) over real and imaginary parts.
double max_z_score(const std::vector<FactorizedShadow> &shadows, const MatrixXc &target) {
    const auto dim = target.rows();
    Eigen::MatrixXd sum_re = Eigen::MatrixXd::Zero(dim, dim), sum_im = sum_re, sq_re = sum_re, sq_im = sum_re;
    for (const auto &s : shadows) {
        const MatrixXc m = to_dense(s).matrix;
        sum_re += m.real();
        sum_im += m.imag();
        sq_re += m.real().cwiseAbs2();
        sq_im += m.imag().cwiseAbs2();
    }
    const double k = static_cast<double>(shadows.size());
    double worst = 0.0;
    const auto update = [&](const Eigen::MatrixXd &sum, const Eigen::MatrixXd &sq, const Eigen::MatrixXd &want) {
        for (Eigen::Index i = 0; i < sum.size(); ++i) {
            const double mean = sum.data()[i] / k;
            const double var = (sq.data()[i] - k * mean * mean) / (k - 1.0);
            const double diff = std::abs(mean - want.data()[i]);
            if (var <= 0.0) {
                if (diff > 1e-12) worst = std::numeric_limits<double>::infinity();
                continue;
            }
            worst = std::max(worst, diff / std::sqrt(var / k));
        }
    };
    update(sum_re, sq_re, target.real());
    update(sum_im, sq_im, target.imag());
    return worst;
}

// Mean of 10^5 factorized shadows of a fixed 3-qubit state: every element's
// z-score below 5; with depolarizing readout and the exact G, the robust mean
// matches the ideal state.
Outcome shadow_unbiasedness() {
    const int n = 3;
    Rng rng(RngSeed{kSeed, 600});
    const auto rho = DensityMatrixDense::random(n, 2, rng);
    const auto settings = sample_settings(Ensemble::Haar, n, 100000, RngSeed{kSeed, 601});
    const auto clean = simulate_group(rho, settings, 1, std::nullopt, RngSeed{kSeed, 602});
    const double z_clean = max_z_score(factorized_shadows(clean), rho.matrix());

    const std::vector<double> p = {0.1, 0.15, 0.2};
    const NoiseModel noise(p);
    const auto noisy = simulate_group(rho, settings, 1, noise, RngSeed{kSeed, 603});
    const CalibrationVector g({1.0 - p[0], 1.0 - p[1], 1.0 - p[2]});
    const double z_robust = max_z_score(factorized_shadows(noisy, g), rho.matrix());
    const double z_uncorrected = max_z_score(factorized_shadows(noisy), rho.matrix());
    return {z_clean < 5.0 && z_robust < 5.0, "max z: noiseless " + fmt(z_clean, 3) + ", robust " + fmt(z_robust, 3) +
                                                 " (uncorrected noisy data: " + fmt(z_uncorrected, 3) + ")"};
}

// 8-qubit random state, 10^5 computational-basis shots: xeb/self_xeb in
// [0.95, 1.05] for data from the state, xeb in [-0.05, 0.05] for data from the
// maximally mixed state.
Outcome xeb_consistency() {
    const int n = 8;
    Rng rng(RngSeed{kSeed, 700});
    const auto ideal = PureStateDense::random(n, rng);
    const ComputationalBasisSetting basis(n);
    const auto own = sample_measurements(ideal, basis, 100000, std::nullopt, rng);
    const auto mixed = sample_measurements(DensityMatrixDense::maximally_mixed(n), basis, 100000, std::nullopt, rng);
    const double self = self_xeb(ideal);
    const double ratio = xeb(ideal, own) / self;
    const double flat = xeb(ideal, mixed);
    return {ratio >= 0.95 && ratio <= 1.05 && flat >= -0.05 && flat <= 0.05,
            "xeb/self_xeb = " + fmt(ratio) + " (self_xeb " + fmt(self) + "), mixed-state xeb = " + fmt(flat, 3)};
}

// N=8, chi=4 MPS sampling: chi-squared goodness of fit against dense Born
// probabilities with p > 1e-4 over 10^5 shots.
Outcome mps_sampling_fit() {
    const int n = 8;
    Rng rng(RngSeed{kSeed, 800});
    const auto mps = random_mps(n, 4, rng);
    const MeasurementSetting setting = local_unitary_setting(n, rng);
    const int shots = 100000;
    const auto data = sample_measurements(mps, setting, shots, std::nullopt, rng);
    const Eigen::VectorXd p = oracle::born(oracle::density(mps), oracle::setting_unitary(setting));

    std::vector<double> counts(static_cast<std::size_t>(p.size()), 0.0);
    for (int s = 0; s < shots; ++s) counts[data.outcomes().shot_index(s)] += 1.0;
    // Bins expected below 5 counts are pooled into one.
    double stat = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
    int bins = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double e = p(i) * shots;
        if (e < 5.0) {
            pooled_obs += counts[static_cast<std::size_t>(i)];
            pooled_exp += e;
            continue;
        }
        stat += (counts[static_cast<std::size_t>(i)] - e) * (counts[static_cast<std::size_t>(i)] - e) / e;
        ++bins;
    }
    if (pooled_exp > 0.0) {
        stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++bins;
    }
    const boost::math::chi_squared dist(bins - 1);
    const double pvalue = boost::math::cdf(boost::math::complement(dist, stat));
    return {pvalue > 1e-4, "chi2 = " + fmt(stat) + " on " + std::to_string(bins - 1) + " dof, p = " + fmt(pvalue, 3)};
}

// Shallow shadows at N=4, depth 2, 10^5 snapshots: mean shadow within trace
// distance 0.05 of the state and a weight-4 Pauli estimate within 2 sem.
Outcome shallow_unbiasedness() {
    const int n = 4, depth = 2;
    Rng rng(RngSeed{kSeed, 900});
    const auto psi = PureStateDense::random(n, rng);
    Rng train(RngSeed{kSeed, 901});
    const auto inverse = invert_channel(estimate_channel(n, depth, 2000, train));
    const auto settings = sample_settings(Ensemble::Shallow, n, 10000, RngSeed{kSeed, 902}, depth);
    const auto group = simulate_group(psi, settings, 10, std::nullopt, RngSeed{kSeed, 903});
    const auto means = shallow_batch_shadows(group, inverse, group.n_settings());

    MatrixXc mean = MatrixXc::Zero(16, 16);
    for (const auto &b : means.batches) mean += b.matrix;
    mean /= static_cast<double>(means.n_batches());
    const MatrixXc rho = psi.amplitudes() * psi.amplitudes().adjoint();
    const double distance = oracle::trace_distance(mean, rho);

    const std::string letters = "XYZX";
    const auto est = expect_shadow(PauliObservable::parse(letters), means.batches, true);
    const double exact = (oracle::pauli_string(letters) * rho).trace().real();
    const bool pauli_ok = std::abs(est.value - exact) <= 2.0 * *est.sem;
    return {distance < 0.05 && pauli_ok, "trace distance " + fmt(distance, 3) + " (bound 0.05), <" + letters +
                                             "> = " + fmt(est.value, 3) + " ± " + fmt(2.0 * *est.sem, 2) +
                                             " vs exact " + fmt(exact, 3) + (pauli_ok ? " ok" : " miss") +
                                             ", channel condition " + fmt(inverse.condition_number, 3)};
}

}  // namespace

int main(int argc, char **argv) {
    std::optional<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--only N]\n";
            return 2;
        }
    }
    const std::vector<Criterion> criteria = {
        {1, "pauli-coverage-mps50", pauli_coverage_mps50},
        {2, "robust-purity-ghz5", robust_purity_ghz5},
        {3, "moment-coverage-mixed4", moment_coverage_mixed4},
        {4, "moments-match-enumeration", moments_match_enumeration},
        {5, "shadow-unbiasedness", shadow_unbiasedness},
        {6, "jackknife-cache", jackknife_cache},
        {7, "xeb-consistency", xeb_consistency},
        {8, "mps-sampling-fit", mps_sampling_fit},
        {9, "shallow-unbiasedness", shallow_unbiasedness},
    };
    bool all = true;
    bool ran = false;
    for (const auto &c : criteria) {
        if (only && *only != c.id) continue;
        ran = true;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail
                  << std::endl;
    }
    if (!ran) {
        std::cerr << "no criterion " << *only << "\n";
        return 2;
    }
    return all ? 0 : 1;
}
