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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rmkit/rmkit.hpp"
#include "test_support.hpp"

namespace {

using namespace rmkit;
using testing_support::QuietWarnings;

std::vector<MatrixXc> random_batches(int count, int dim, std::uint64_t seed) {
    Rng rng(RngSeed{seed, 0});
    std::vector<MatrixXc> out;
    for (int i = 0; i < count; ++i) out.push_back(oracle::random_hermitian_unit_trace(dim, rng) / 2.0);
    return out;
}

BatchShadowSet as_batch_set(const std::vector<MatrixXc> &matrices) {
    int n = 0;
    while ((Eigen::Index{1} << n) < matrices.front().rows()) ++n;
    return average_into_batches(matrices, static_cast<int>(matrices.size()), 1, Subsystem::range(1, n));
}

std::vector<MatrixXc> without(const std::vector<MatrixXc> &m, int i) {
    std::vector<MatrixXc> out = m;
    out.erase(out.begin() + i);
    return out;
}

TEST(Sem, HandCases) {
    const std::vector<double> flat = {1, 1, 1, 1};
    EXPECT_DOUBLE_EQ(sem(flat), 0.0);
    const std::vector<double> pair = {0, 2};
    EXPECT_DOUBLE_EQ(sem(pair), 1.0);
    EXPECT_RMKIT_ERROR(sem(std::vector<double>{3.0}), ErrorCode::NotEnoughSamples);
    EXPECT_RMKIT_ERROR(mean(std::vector<double>{}), ErrorCode::NotEnoughSamples);
}

TEST(Sem, StandardNormalSample) {
    Rng rng(RngSeed{1, 0});
    std::vector<double> v(10000);
    for (auto &x : v) x = rng.normal();
    EXPECT_NEAR(sem(v), 0.01, 0.002);
}

TEST(BlockedSem, EqualsSemOfBlockMeans) {
    const std::vector<double> v = {1, 3, 2, 2, 5, 7, 0, 4};
    const std::vector<double> means = {2, 2, 6, 2};
    EXPECT_DOUBLE_EQ(blocked_sem(v, 2), sem(means));
    EXPECT_DOUBLE_EQ(blocked_sem(v, 1), sem(v));
    EXPECT_RMKIT_ERROR(blocked_sem(v, 3), ErrorCode::SizeMismatch);
    EXPECT_RMKIT_ERROR(blocked_sem(v, 0), ErrorCode::InvalidArgument);
}

TEST(Jackknife, FormulaAndInvariants) {
    const std::vector<double> loo = {1.0, 2.0, 4.0, 5.0};
    const auto r = jackknife(3.5, loo);
    EXPECT_DOUBLE_EQ(r.raw_estimate, 3.5);
    EXPECT_NEAR(r.point_estimate, 4.0 * 3.5 - 3.0 * 3.0, 1e-12);
    EXPECT_NEAR(r.variance, 0.75 * 10.0, 1e-12);
    EXPECT_NEAR(r.standard_error(), std::sqrt(7.5), 1e-12);
    EXPECT_RMKIT_ERROR(jackknife(1.0, {1.0}), ErrorCode::NotEnoughBatches);
}

TEST(Jackknife, MeanOfSampleReproducesSem) {
    // For the sample mean, the jackknife standard error equals the plain SEM.
    Rng rng(RngSeed{2, 0});
    std::vector<double> v(30);
    for (auto &x : v) x = rng.normal();
    std::vector<double> loo;
    double total = 0.0;
    for (double x : v) total += x;
    for (double x : v) loo.push_back((total - x) / 29.0);
    const auto r = jackknife(total / 30.0, loo);
    EXPECT_NEAR(r.standard_error(), sem(v), 1e-12);
    EXPECT_NEAR(r.point_estimate, total / 30.0, 1e-12);
}

TEST(TraceMomentTermsTest, ThreeBatchPairSum) {
    const auto m = random_batches(3, 4, 3);
    const int orders[] = {2};
    const auto t = trace_moment_terms(m, orders).front();
    const double by_hand = 2.0 * ((m[0] * m[1]).trace() + (m[0] * m[2]).trace() + (m[1] * m[2]).trace()).real() / 6.0;
    EXPECT_NEAR(t.estimate(), by_hand, 1e-12);
    EXPECT_NEAR(t.estimate(), oracle::moment_by_enumeration(m, 2), 1e-12);
}

TEST(TraceMomentTermsTest, MatchesEnumerationAndLeaveOneOut) {
    for (int n_batches = 2; n_batches <= 8; ++n_batches) {
        const auto m = random_batches(n_batches, 4, 10 + static_cast<std::uint64_t>(n_batches));
        std::vector<int> orders;
        for (int k = 2; k <= std::min(4, n_batches); ++k) orders.push_back(k);
        const auto terms = trace_moment_terms(m, orders);
        for (std::size_t o = 0; o < orders.size(); ++o) {
            const int k = orders[o];
            EXPECT_NEAR(terms[o].estimate(), oracle::moment_by_enumeration(m, k), 1e-12) << n_batches << " " << k;
            EXPECT_NEAR(terms[o].estimate(), trace_moment(m, k), 1e-12);
            if (n_batches - 1 < k) continue;
            for (int i = 0; i < n_batches; ++i) {
                EXPECT_NEAR(terms[o].leave_one_out(i), oracle::moment_by_enumeration(without(m, i), k), 1e-12);
            }
        }
    }
}

TEST(TraceMomentTermsTest, ErrorPaths) {
    const auto m = random_batches(17, 2, 20);
    const int four[] = {4};
    const int two[] = {2};
    const int one[] = {1};
    EXPECT_RMKIT_ERROR(trace_moment_terms(m, four), ErrorCode::TooLarge);
    EXPECT_NO_THROW(trace_moment_terms(m, two));
    EXPECT_RMKIT_ERROR(trace_moment_terms(std::span(m).first(2), std::span<const int>(std::vector<int>{3})),
                       ErrorCode::NotEnoughBatches);
    EXPECT_RMKIT_ERROR(trace_moment_terms(m, one), ErrorCode::InvalidArgument);
    EXPECT_RMKIT_ERROR(trace_moment_terms(m, std::span<const int>{}), ErrorCode::InvalidArgument);
    std::vector<MatrixXc> mixed = {MatrixXc::Identity(2, 2), MatrixXc::Identity(4, 4)};
    EXPECT_RMKIT_ERROR(trace_moment_terms(mixed, two), ErrorCode::SizeMismatch);
}

TEST(JackknifeMoments, FiveBatchLeaveOneOutMatchesRecompute) {
    QuietWarnings quiet;
    const auto m = random_batches(5, 4, 30);
    const int orders[] = {2};
    const auto r = jackknife_moments(as_batch_set(m), orders);
    ASSERT_EQ(r.results.size(), 1u);
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(r.results[0].leave_one_out[static_cast<std::size_t>(i)],
                    oracle::moment_by_enumeration(without(m, i), 2), 1e-12);
    }
    const auto &j = r.results[0];
    EXPECT_NEAR(j.point_estimate, 5.0 * j.raw_estimate - 4.0 * mean(j.leave_one_out), 1e-12);
    EXPECT_GE(j.variance, 0.0);
}

TEST(JackknifeMoments, IdenticalBatchesHaveZeroVariance) {
    QuietWarnings quiet;
    const MatrixXc base = random_batches(1, 8, 31).front();
    const std::vector<MatrixXc> m(6, base);
    const int orders[] = {2, 3, 4};
    const auto r = jackknife_moments(as_batch_set(m), orders);
    for (std::size_t o = 0; o < 3; ++o) {
        MatrixXc power = base;
        for (int k = 1; k < orders[o]; ++k) power = power * base;
        const double exact = power.trace().real();
        EXPECT_NEAR(r.results[o].raw_estimate, exact, 1e-12);
        EXPECT_NEAR(r.results[o].point_estimate, exact, 1e-12);
        EXPECT_NEAR(r.results[o].variance, 0.0, 1e-24);
        for (double v : r.results[o].leave_one_out) EXPECT_NEAR(v, exact, 1e-12);
    }
}

TEST(JackknifeMoments, CovarianceDiagonalMatchesVariances) {
    QuietWarnings quiet;
    const auto m = random_batches(8, 4, 32);
    const int orders[] = {2, 3, 4};
    const auto r = jackknife_moments(as_batch_set(m), orders, true);
    ASSERT_TRUE(r.covariance.has_value());
    for (Eigen::Index a = 0; a < 3; ++a) {
        EXPECT_DOUBLE_EQ((*r.covariance)(a, a), r.results[static_cast<std::size_t>(a)].variance);
        for (Eigen::Index b = 0; b < 3; ++b) EXPECT_DOUBLE_EQ((*r.covariance)(a, b), (*r.covariance)(b, a));
    }
    EXPECT_FALSE(jackknife_moments(as_batch_set(m), orders).covariance.has_value());
}

TEST(JackknifeMoments, PermutationInvariance) {
    QuietWarnings quiet;
    auto m = random_batches(7, 4, 33);
    const int orders[] = {2, 3, 4};
    const auto a = jackknife_moments(as_batch_set(m), orders);
    std::reverse(m.begin(), m.end());
    std::rotate(m.begin(), m.begin() + 2, m.end());
    const auto b = jackknife_moments(as_batch_set(m), orders);
    for (std::size_t o = 0; o < 3; ++o) {
        EXPECT_NEAR(a.results[o].raw_estimate, b.results[o].raw_estimate, 1e-12);
        EXPECT_NEAR(a.results[o].point_estimate, b.results[o].point_estimate, 1e-12);
        EXPECT_NEAR(a.results[o].variance, b.results[o].variance, 1e-12);
    }
}

TEST(JackknifeMoments, WarnsBelowTenBatchesAndRejectsTooFew) {
    std::vector<std::string> seen;
    const auto previous = set_warning_handler([&](std::string_view msg) { seen.emplace_back(msg); });
    const int two[] = {2};
    jackknife_moments(as_batch_set(random_batches(9, 2, 34)), two);
    EXPECT_EQ(seen.size(), 1u);
    jackknife_moments(as_batch_set(random_batches(10, 2, 35)), two);
    EXPECT_EQ(seen.size(), 1u);
    const int three[] = {3};
    EXPECT_RMKIT_ERROR(jackknife_moments(as_batch_set(random_batches(3, 2, 36)), three), ErrorCode::NotEnoughBatches);
    set_warning_handler(previous);
}

TEST(JackknifeMoments, ThreadCountDoesNotChangeResults) {
    QuietWarnings quiet;
    const auto m = random_batches(9, 8, 37);
    const int orders[] = {2, 3, 4, 5};
    set_thread_count(1);
    const auto serial = jackknife_moments(as_batch_set(m), orders, true);
    set_thread_count(3);
    const auto parallel = jackknife_moments(as_batch_set(m), orders, true);
    set_thread_count(1);
    for (std::size_t o = 0; o < 4; ++o) {
        EXPECT_EQ(serial.results[o].raw_estimate, parallel.results[o].raw_estimate);
        EXPECT_EQ(serial.results[o].leave_one_out, parallel.results[o].leave_one_out);
    }
}

TEST(JackknifeMoments, GhzPurityCoverage) {
    // Reduced GHZ(5) state on three sites has purity 1/2.
    int covered = 0;
    const auto settings_for = [](std::uint64_t rep) {
        return sample_settings(Ensemble::Haar, 5, 200, RngSeed{rep, 40});
    };
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const auto group = simulate_group(ghz_state(5), settings_for(rep), 100, std::nullopt, RngSeed{rep, 41});
        const auto batches = dense_batch_shadows(reduce_to_subsystem(group, Subsystem::range(1, 3)), 10);
        const int two[] = {2};
        const auto r = jackknife_moments(batches, two).results.front();
        covered += std::abs(r.point_estimate - 0.5) <= 2.0 * r.standard_error() ? 1 : 0;
    }
    // With 10 batches the studentized error follows t with 9 degrees of
    // freedom, so +-2 sigma covers 92.4 % (measured: 554 of 600 on other
    // seeds). 85 is three binomial standard deviations below.
    EXPECT_GE(covered, 85);
}

TEST(Warnings, HandlerSwapReturnsPrevious) {
    std::string last;
    const auto original = set_warning_handler([&](std::string_view m) { last = m; });
    warn("first");
    EXPECT_EQ(last, "first");
    const auto mine = set_warning_handler({});
    warn("dropped");
    EXPECT_EQ(last, "first");
    set_warning_handler(mine);
    warn("again");
    EXPECT_EQ(last, "again");
    set_warning_handler(original);
}

}  // namespace
