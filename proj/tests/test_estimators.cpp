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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rmkit/rmkit.hpp"
#include "test_support.hpp"

namespace {

using namespace rmkit;
using testing_support::data_with_bits;
using testing_support::QuietWarnings;

// Single-seed statistical checks use three standard errors so that a correct
// implementation fails them only rarely; coverage rates are checked in the
// acceptance suite.
constexpr double kZ = 3.0;

MeasurementGroup group_for(const QuantumState &state, Ensemble ensemble, int n_settings, int n_shots,
                           std::uint64_t seed) {
    const auto settings = sample_settings(ensemble, n_qubits(state), n_settings, RngSeed{seed, 0});
    return simulate_group(state, settings, n_shots, std::nullopt, RngSeed{seed, 1});
}

MeasurementGroup same_settings(const QuantumState &state, const MeasurementGroup &like, std::uint64_t seed) {
    std::vector<MeasurementSetting> settings;
    for (const auto &e : like.entries()) settings.push_back(e.setting());
    return simulate_group(state, settings, like.n_shots(), std::nullopt, RngSeed{seed, 2});
}

// 2^N sum_{l, l'} (-2)^{-D} f1(s_l) f2(s_l') over settings, from raw shots.
double overlap_by_pairs(const MeasurementGroup &a, const MeasurementGroup &b) {
    const int n = a.n_qubits();
    double acc = 0.0;
    for (int j = 0; j < a.n_settings(); ++j) {
        const auto &x = a[static_cast<std::size_t>(j)].outcomes();
        const auto &y = b[static_cast<std::size_t>(j)].outcomes();
        double sum = 0.0;
        for (int p = 0; p < x.n_shots(); ++p) {
            for (int q = 0; q < y.n_shots(); ++q) {
                int d = 0;
                for (int s = 1; s <= n; ++s) d += x.bit(p, s) != y.bit(q, s);
                sum += std::pow(-2.0, -d);
            }
        }
        acc += std::pow(2.0, n) * sum / (static_cast<double>(x.n_shots()) * y.n_shots());
    }
    return acc / a.n_settings();
}

void expect_within(const EstimateWithError &e, double exact, double z = kZ) {
    ASSERT_TRUE(e.sem.has_value());
    EXPECT_LE(std::abs(e.value - exact), z * *e.sem) << e.value << " +- " << *e.sem << " vs " << exact;
}

TEST(ExpectShadow, IdentityStringIsExactlyOne) {
    Rng rng(RngSeed{1, 0});
    const auto group = group_for(PureStateDense::random(3, rng), Ensemble::Haar, 20, 5, 1);
    const auto r = expect_shadow(PauliObservable::parse("III"), factorized_shadows(group), true);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_NEAR(*r.sem, 0.0, 1e-12);
    EXPECT_EQ(r.n_samples, 100u);
}

TEST(ExpectShadow, GhzCorrelator) {
    const auto group = group_for(ghz_state(2), Ensemble::Haar, 5000, 10, 2);
    expect_within(expect_shadow(PauliObservable::parse("ZZ"), factorized_shadows(group), true, 10), 1.0);
    expect_within(expect_shadow(PauliObservable::parse("XX"), factorized_shadows(group), true, 10), 1.0);
    expect_within(expect_shadow(PauliObservable::parse("ZI"), factorized_shadows(group), true, 10), 0.0);
}

TEST(ExpectShadow, MatchesOracleTraceForEachSnapshot) {
    Rng rng(RngSeed{3, 0});
    const auto group = group_for(PureStateDense::random(3, rng), Ensemble::Haar, 4, 2, 3);
    const PauliObservable obs(
        {PauliTerm{0.7, {Pauli::X, Pauli::I, Pauli::Y}}, PauliTerm{-0.2, {Pauli::Z, Pauli::Z, Pauli::Z}}});
    const MatrixXc o = oracle::observable(obs);
    for (const auto &s : factorized_shadows(group)) {
        const double want = (o * oracle::product(s.factors)).trace().real();
        EXPECT_NEAR(shadow_expectation(obs, s), want, 1e-12);
        EXPECT_NEAR(shadow_expectation(obs, to_dense(s).matrix), want, 1e-12);
    }
}

TEST(ExpectShadow, LinearInTheObservable) {
    Rng rng(RngSeed{4, 0});
    const auto shadows = factorized_shadows(group_for(PureStateDense::random(4, rng), Ensemble::Haar, 50, 4, 4));
    const auto a = PauliObservable::parse("XIZY");
    const auto b = PauliObservable::parse("IZZI");
    const PauliObservable sum({PauliTerm{2.5, a.terms()[0].letters}, PauliTerm{-1.5, b.terms()[0].letters}});
    const double combined = expect_shadow(sum, shadows).value;
    EXPECT_NEAR(combined, 2.5 * expect_shadow(a, shadows).value - 1.5 * expect_shadow(b, shadows).value, 1e-12);
}

TEST(ExpectShadow, FactorizedAndDenseRoutesAgree) {
    Rng rng(RngSeed{5, 0});
    const auto mps = random_mps(8, 2, rng);
    const auto group = group_for(mps, Ensemble::Haar, 100, 20, 5);
    const Subsystem sub({1, 4});
    const auto reduced = reduce_to_subsystem(group, sub);
    for (const std::string letters : {"XZ", "YY", "IZ", "XI"}) {
        std::string full(8, 'I');
        full[0] = letters[0];
        full[3] = letters[1];
        const auto obs = PauliObservable::parse(full);
        const auto small = reduce_to_subsystem(obs, sub);
        const auto fact = expect_shadow(obs, factorized_shadows(group), true, 20);
        const auto dense = expect_shadow(small, dense_shadows(reduced), true, 20);
        std::vector<FactorizedShadow> cut;
        for (const auto &s : factorized_shadows(group)) cut.push_back(reduce_shadow(s, sub));
        const auto cut_route = expect_shadow(small, cut, true, 20);
        EXPECT_NEAR(fact.value, dense.value, 1e-10);
        EXPECT_NEAR(*fact.sem, *dense.sem, 1e-10);
        EXPECT_NEAR(fact.value, cut_route.value, 1e-10);
    }
}

TEST(ExpectShadow, BlockedSemGroupsShotsOfOneSetting) {
    Rng rng(RngSeed{6, 0});
    const auto shadows = factorized_shadows(group_for(PureStateDense::random(2, rng), Ensemble::Haar, 30, 4, 6));
    const auto obs = PauliObservable::parse("XY");
    std::vector<double> values;
    for (const auto &s : shadows) values.push_back(shadow_expectation(obs, s));
    EXPECT_NEAR(*expect_shadow(obs, shadows, true, 4).sem, blocked_sem(values, 4), 1e-14);
    EXPECT_NEAR(*expect_shadow(obs, shadows, true).sem, sem(values), 1e-14);
    EXPECT_FALSE(expect_shadow(obs, shadows).sem.has_value());
}

TEST(ExpectShadow, ErrorPaths) {
    Rng rng(RngSeed{7, 0});
    const auto shadows = factorized_shadows(group_for(PureStateDense::random(2, rng), Ensemble::Haar, 3, 2, 7));
    EXPECT_RMKIT_ERROR(expect_shadow(PauliObservable::parse("XYZ"), shadows), ErrorCode::SizeMismatch);
    EXPECT_RMKIT_ERROR(expect_shadow(PauliObservable::parse("XY"), std::span<const FactorizedShadow>{}),
                       ErrorCode::NotEnoughSamples);
    EXPECT_RMKIT_ERROR(shadow_expectation(PauliObservable::parse("XY"), MatrixXc::Identity(8, 8)),
                       ErrorCode::SizeMismatch);
}

TEST(TraceMoments, EqualEnumerationOverBatches) {
    QuietWarnings quiet;
    Rng rng(RngSeed{8, 0});
    for (int n_batches : {3, 5, 6}) {
        const auto group = group_for(DensityMatrixDense::random(2, 2, rng), Ensemble::Haar, 12, 5, 8);
        const auto batches = dense_batch_shadows(group, n_batches);
        std::vector<MatrixXc> m;
        for (const auto &b : batches.batches) m.push_back(b.matrix);
        std::vector<int> orders;
        for (int k = 2; k <= std::min(4, n_batches); ++k) orders.push_back(k);
        const auto est = trace_moments(batches, orders);
        for (std::size_t o = 0; o < orders.size(); ++o) {
            EXPECT_NEAR(est[o].value, oracle::moment_by_enumeration(m, orders[o]), 1e-12);
            EXPECT_FALSE(est[o].sem.has_value());
        }
    }
}

TEST(TraceMoments, SemIsJackknifeError) {
    QuietWarnings quiet;
    Rng rng(RngSeed{9, 0});
    const auto batches = dense_batch_shadows(group_for(PureStateDense::random(3, rng), Ensemble::Haar, 40, 10, 9), 8);
    const int orders[] = {2, 3};
    const auto est = trace_moments(batches, orders, true);
    const auto jk = jackknife_moments(batches, orders);
    for (std::size_t o = 0; o < 2; ++o) {
        EXPECT_NEAR(*est[o].sem, jk.results[o].standard_error(), 1e-14);
        EXPECT_NEAR(est[o].value, jk.results[o].raw_estimate, 1e-14);
    }
}

TEST(TraceMoments, PureStatePurityIsOne) {
    Rng rng(RngSeed{10, 0});
    const auto batches =
        dense_batch_shadows(group_for(PureStateDense::random(2, rng), Ensemble::Haar, 2000, 50, 10), 20);
    const int two[] = {2};
    expect_within(trace_moments(batches, two, true).front(), 1.0);
}

TEST(TraceMoments, ErrorPaths) {
    QuietWarnings quiet;
    const auto batches = dense_batch_shadows(group_for(PureStateDense::zero(1), Ensemble::Haar, 3, 2, 11), 3);
    const int four[] = {4};
    EXPECT_RMKIT_ERROR(trace_moments(batches, four), ErrorCode::NotEnoughBatches);
    const int three[] = {3};
    EXPECT_NO_THROW(trace_moments(batches, three));
    EXPECT_RMKIT_ERROR(trace_moments(batches, three, true), ErrorCode::NotEnoughBatches);
}

TEST(PurityDirect, EqualsPairwiseOracle) {
    Rng rng(RngSeed{12, 0});
    const auto group = group_for(DensityMatrixDense::random(3, 3, rng), Ensemble::Haar, 15, 7, 12);
    const auto r = purity_direct(group, true);
    EXPECT_NEAR(r.value, oracle::purity_by_pairs(group), 1e-12);
    EXPECT_TRUE(r.sem.has_value());
}

TEST(PurityDirect, KnownPurities) {
    expect_within(purity_direct(group_for(product_zero(3), Ensemble::Haar, 500, 50, 13), true), 1.0);
    const auto mixed = DensityMatrixDense::maximally_mixed(1);
    expect_within(purity_direct(group_for(mixed, Ensemble::Haar, 1000, 100, 14), true), 0.5);
    const auto ghz = group_for(ghz_state(5), Ensemble::Haar, 1000, 100, 15);
    expect_within(purity_direct(reduce_to_subsystem(ghz, Subsystem::range(1, 3)), true), 0.5);
}

TEST(PurityDirect, ErrorPaths) {
    Rng rng(RngSeed{16, 0});
    EXPECT_RMKIT_ERROR(purity_direct(group_for(product_zero(2), Ensemble::Haar, 3, 1, 16)), ErrorCode::NotEnoughShots);
    const MeasurementGroup shallow({data_with_bits(shallow_setting(2, 1, rng), 2, {0, 1, 1, 1})});
    EXPECT_RMKIT_ERROR(purity_direct(shallow), ErrorCode::UnsupportedSetting);
}

TEST(PurityDirect, AgreesWithShadowRoute) {
    QuietWarnings quiet;
    Rng rng(RngSeed{17, 0});
    const auto group = group_for(DensityMatrixDense::random(3, 2, rng), Ensemble::Haar, 400, 50, 17);
    const auto direct = purity_direct(group, true);
    const int two[] = {2};
    const auto shadow = trace_moments(dense_batch_shadows(group, 10), two, true).front();
    const double combined = std::hypot(*direct.sem, *shadow.sem);
    EXPECT_LE(std::abs(direct.value - shadow.value), kZ * combined);
}

TEST(OverlapDirect, EqualsPairwiseOracle) {
    Rng rng(RngSeed{18, 0});
    const auto a = group_for(PureStateDense::random(3, rng), Ensemble::Haar, 10, 6, 18);
    const auto b = same_settings(PureStateDense::random(3, rng), a, 18);
    EXPECT_NEAR(overlap_direct(a, b).value, overlap_by_pairs(a, b), 1e-12);
}

TEST(OverlapDirect, KnownOverlaps) {
    Rng rng(RngSeed{19, 0});
    const auto psi = PureStateDense::random(2, rng);
    const auto a = group_for(psi, Ensemble::Haar, 1000, 50, 19);
    expect_within(overlap_direct(a, same_settings(psi, a, 19), true), 1.0);

    VectorXc one = VectorXc::Zero(2);
    one(1) = 1.0;
    const auto zero_group = group_for(PureStateDense::zero(1), Ensemble::Haar, 1000, 50, 20);
    expect_within(overlap_direct(zero_group, same_settings(PureStateDense(one), zero_group, 20), true), 0.0);

    const auto p1 = PureStateDense::random(3, rng);
    const auto p2 = PureStateDense::random(3, rng);
    const auto g1 = group_for(p1, Ensemble::Haar, 2000, 50, 21);
    const double exact = std::norm(p1.amplitudes().dot(p2.amplitudes()));
    expect_within(overlap_direct(g1, same_settings(p2, g1, 21), true), exact);
}

TEST(OverlapDirect, RejectsDifferentSettings) {
    const auto a = group_for(product_zero(2), Ensemble::Haar, 5, 3, 22);
    const auto b = group_for(product_zero(2), Ensemble::Haar, 5, 3, 23);
    EXPECT_RMKIT_ERROR(overlap_direct(a, b), ErrorCode::SettingsMismatch);
    const auto c = group_for(product_zero(2), Ensemble::Haar, 4, 3, 22);
    EXPECT_RMKIT_ERROR(overlap_direct(a, c), ErrorCode::SettingsMismatch);
}

TEST(CrossPlatformFidelity, KnownFidelities) {
    Rng rng(RngSeed{24, 0});
    const auto psi = PureStateDense::random(2, rng);
    const auto a = group_for(psi, Ensemble::Haar, 1000, 50, 24);
    expect_within(cross_platform_fidelity(a, same_settings(psi, a, 24), true), 1.0);

    VectorXc plus = VectorXc::Zero(4);
    plus(3) = 1.0;
    const auto z = group_for(PureStateDense::zero(2), Ensemble::Haar, 1000, 50, 25);
    expect_within(cross_platform_fidelity(z, same_settings(PureStateDense(plus), z, 25), true), 0.0);
}

TEST(CrossPlatformFidelity, MixedPairMatchesDenseOracle) {
    Rng rng(RngSeed{26, 0});
    const auto r1 = DensityMatrixDense::random(3, 2, rng);
    const auto r2 = DensityMatrixDense::random(3, 3, rng);
    const auto a = group_for(r1, Ensemble::Haar, 3000, 50, 26);
    const auto b = same_settings(r2, a, 26);
    const double p1 = (r1.matrix() * r1.matrix()).trace().real();
    const double p2 = (r2.matrix() * r2.matrix()).trace().real();
    const double exact = (r1.matrix() * r2.matrix()).trace().real() / std::max(p1, p2);
    const auto f = cross_platform_fidelity(a, b, true);
    expect_within(f, exact);
    const double ratio = overlap_direct(a, b).value / std::max(purity_direct(a).value, purity_direct(b).value);
    EXPECT_NEAR(f.value, ratio, 1e-12);
}

TEST(Xeb, UniformIdealIsExactlyZero) {
    Rng rng(RngSeed{27, 0});
    const auto ideal = PureStateDense::uniform_superposition(4);
    const auto data =
        sample_measurements(PureStateDense::random(4, rng), ComputationalBasisSetting(4), 300, std::nullopt, rng);
    EXPECT_EQ(xeb(ideal, data), 0.0);
    EXPECT_NEAR(self_xeb(ideal), 0.0, 1e-12);
}

TEST(Xeb, SelfConsistentOnPorterThomasState) {
    Rng rng(RngSeed{28, 0});
    const auto ideal = PureStateDense::random(10, rng);
    const int shots = 20000;
    const auto data = sample_measurements(ideal, ComputationalBasisSetting(10), shots, std::nullopt, rng);
    const double d = 1024.0;
    const Eigen::VectorXd p = ideal.amplitudes().cwiseAbs2();
    // Per-shot values d p(s) - 1 under s ~ p have variance d^2 sum p^3 - (d sum p^2)^2.
    const double var = d * d * p.array().cube().sum() - std::pow(d * p.squaredNorm(), 2);
    const double se = std::sqrt(var / shots);
    EXPECT_LE(std::abs(xeb(ideal, data) - self_xeb(ideal)), kZ * se);
    EXPECT_NEAR(xeb(ideal, data) / self_xeb(ideal), 1.0, 0.1);
}

TEST(Xeb, MaximallyMixedDataGivesZero) {
    Rng rng(RngSeed{29, 0});
    const auto ideal = random_mps(6, 4, rng);
    const int shots = 20000;
    const auto data = sample_measurements(DensityMatrixDense::maximally_mixed(6), ComputationalBasisSetting(6), shots,
                                          std::nullopt, rng);
    const Eigen::VectorXd p = ideal.to_dense().cwiseAbs2();
    const double d = 64.0;
    // Under uniform s, d p(s) - 1 has variance d sum p^2 - 1.
    const double se = std::sqrt((d * p.squaredNorm() - 1.0) / shots);
    EXPECT_LE(std::abs(xeb(ideal, data)), kZ * se);
}

TEST(Xeb, MatchesDirectAverage) {
    Rng rng(RngSeed{30, 0});
    const auto mps = random_mps(7, 3, rng);
    const auto data = sample_measurements(mps, ComputationalBasisSetting(7), 500, std::nullopt, rng);
    const Eigen::VectorXd p = oracle::mps_amplitudes(mps).cwiseAbs2();
    double acc = 0.0;
    for (int s = 0; s < data.n_shots(); ++s) acc += p(static_cast<Eigen::Index>(data.outcomes().shot_index(s)));
    EXPECT_NEAR(xeb(mps, data), 128.0 * acc / 500.0 - 1.0, 1e-10);
    EXPECT_NEAR(xeb(PureStateDense(mps.to_dense()), data), xeb(mps, data), 1e-10);
    const MeasurementData identity(LocalUnitarySetting(std::vector<Mat2>(7, Mat2::Identity())), data.outcomes());
    EXPECT_NEAR(xeb(mps, identity), xeb(mps, data), 1e-15);
}

TEST(Xeb, ErrorPaths) {
    Rng rng(RngSeed{31, 0});
    const auto rotated =
        sample_measurements(PureStateDense::zero(2), local_unitary_setting(2, rng), 5, std::nullopt, rng);
    EXPECT_RMKIT_ERROR(xeb(PureStateDense::zero(2), rotated), ErrorCode::UnsupportedSetting);
    const auto data = sample_measurements(PureStateDense::zero(2), ComputationalBasisSetting(2), 5, std::nullopt, rng);
    EXPECT_RMKIT_ERROR(xeb(DensityMatrixDense::maximally_mixed(2), data), ErrorCode::InvalidArgument);
    EXPECT_RMKIT_ERROR(xeb(PureStateDense::zero(3), data), ErrorCode::SizeMismatch);
    EXPECT_RMKIT_ERROR(self_xeb(ghz_state(30)), ErrorCode::TooLarge);
}

TEST(SelfXeb, ClosedForms) {
    EXPECT_NEAR(self_xeb(PureStateDense::zero(5)), 31.0, 1e-12);
    EXPECT_NEAR(self_xeb(product_zero(5)), 31.0, 1e-12);
    EXPECT_NEAR(self_xeb(ghz_state(4)), 16.0 * 0.5 - 1.0, 1e-12);
    Rng rng(RngSeed{32, 0});
    const auto psi = PureStateDense::random(8, rng);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) sum += std::pow(std::norm(psi.amplitudes()(i)), 2);
    EXPECT_NEAR(self_xeb(psi), 256.0 * sum - 1.0, 1e-12);
}

}  // namespace
