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

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rmkit/linalg.hpp"
#include "rmkit/shadows.hpp"

namespace rmkit {

/// Warnings (e.g. too few batches for reliable error bars) go to this handler.
/// The default writes to std::clog; pass an empty function to silence them.
/// Returns the handler that was replaced.
std::function<void(std::string_view)> set_warning_handler(std::function<void(std::string_view)> handler);
void warn(std::string_view message);

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator) divided by sqrt(n).
double sem(std::span<const double> values);

/// Standard errors of block means: values are split into consecutive blocks of
/// block_size and the SEM of the block means is returned.
double blocked_sem(std::span<const double> values, int block_size);

struct JackknifeResult {
    /// N_B theta - (N_B - 1) mean(theta_(i)).
    double point_estimate = 0.0;
    double raw_estimate = 0.0;
    /// (N_B - 1)/N_B sum_i (theta_(i) - mean)^2.
    double variance = 0.0;
    std::vector<double> leave_one_out;

    double standard_error() const;
};

JackknifeResult jackknife(double full_estimate, std::vector<double> leave_one_out);

/// Ordered-tuple sums behind the trace-moment U-statistic of one order k.
///
/// full_sum is the sum of tr[rho_j1 ... rho_jk] over all ordered k-tuples of
/// distinct batches; containing[i] is the part of that sum coming from tuples
/// that include batch i. Dropping batch i therefore leaves full_sum - containing[i].
struct TraceMomentTerms {
    int order = 0;
    int n_batches = 0;
    double full_sum = 0.0;
    std::vector<double> containing;

    /// (N_B - k)!/N_B! * full_sum.
    double estimate() const;
    /// U-statistic of the N_B - 1 batches other than i.
    double leave_one_out(int i) const;
};

/// Enumerates every tuple once per cyclic class (first entry smallest) with
/// shared prefix products, filling all requested orders in one pass.
/// Orders >= 4 require N_B <= 16.
std::vector<TraceMomentTerms> trace_moment_terms(std::span<const MatrixXc> batches, std::span<const int> orders);

/// The U-statistic of one order alone, skipping the leave-one-out bookkeeping.
double trace_moment(std::span<const MatrixXc> batches, int order);

struct MomentJackknife {
    std::vector<int> orders;
    std::vector<JackknifeResult> results;
    /// sigma_kl = (N_B - 1)/N_B sum_i (theta_k(i) - mean_k)(theta_l(i) - mean_l).
    std::optional<Eigen::MatrixXd> covariance;
};

/// Leave-one-out jackknife of tr(rho^k) for each k, from cached tuple sums.
MomentJackknife jackknife_moments(const BatchShadowSet &batches, std::span<const int> orders, bool compute_cov = false);

}  // namespace rmkit
