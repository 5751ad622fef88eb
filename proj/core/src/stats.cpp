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

#include "rmkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>

#include "rmkit/error.hpp"

namespace rmkit {
namespace {

std::mutex g_warning_mutex;
std::function<void(std::string_view)> g_warning_handler = [](std::string_view message) {
    std::clog << "rmkit warning: " << message << '\n';
};

// n (n-1) ... (n-k+1)
double falling_factorial(int n, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) {
        out *= static_cast<double>(n - i);
    }
    return out;
}

struct TupleWalker {
    std::span<const MatrixXc> batches;
    std::vector<MatrixXc> transposed;
    std::vector<int> order_slot;  // order -> index into terms, -1 if not requested
    int max_order = 0;
    std::vector<TraceMomentTerms> &terms;
    std::vector<int> tuple;
    std::vector<bool> used;
    bool track_containing = true;

    void extend(const MatrixXc &prefix, int first) {
        const int depth = static_cast<int>(tuple.size());
        const int n = static_cast<int>(batches.size());
        const int slot = order_slot[static_cast<std::size_t>(depth + 1)];
        for (int j = first + 1; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) {
                continue;
            }
            tuple.push_back(j);
            used[static_cast<std::size_t>(j)] = true;
            if (slot >= 0) {
                // Each tuple with its smallest entry first stands for depth+1 cyclic rotations.
                const double value = (prefix.cwiseProduct(transposed[static_cast<std::size_t>(j)])).sum().real() *
                                     static_cast<double>(depth + 1);
                auto &t = terms[static_cast<std::size_t>(slot)];
                t.full_sum += value;
                if (track_containing) {
                    for (int member : tuple) {
                        t.containing[static_cast<std::size_t>(member)] += value;
                    }
                }
            }
            if (depth + 1 < max_order) {
                const MatrixXc next = prefix * batches[static_cast<std::size_t>(j)];
                extend(next, first);
            }
            used[static_cast<std::size_t>(j)] = false;
            tuple.pop_back();
        }
    }
};

}  // namespace

std::function<void(std::string_view)> set_warning_handler(std::function<void(std::string_view)> handler) {
    std::lock_guard lock(g_warning_mutex);
    std::swap(g_warning_handler, handler);
    return handler;
}

void warn(std::string_view message) {
    std::lock_guard lock(g_warning_mutex);
    if (g_warning_handler) {
        g_warning_handler(message);
    }
}

double mean(std::span<const double> values) {
    require(!values.empty(), ErrorCode::NotEnoughSamples, "mean of an empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sem(std::span<const double> values) {
    require(values.size() >= 2, ErrorCode::NotEnoughSamples, "standard error needs at least two values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - m) * (v - m);
    }
    const double n = static_cast<double>(values.size());
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

double blocked_sem(std::span<const double> values, int block_size) {
    require(block_size >= 1, ErrorCode::InvalidArgument, "block size must be positive");
    require(values.size() % static_cast<std::size_t>(block_size) == 0, ErrorCode::SizeMismatch,
            "sample count is not a multiple of the block size");
    if (block_size == 1) {
        return sem(values);
    }
    std::vector<double> block_means;
    block_means.reserve(values.size() / static_cast<std::size_t>(block_size));
    for (std::size_t start = 0; start < values.size(); start += static_cast<std::size_t>(block_size)) {
        block_means.push_back(mean(values.subspan(start, static_cast<std::size_t>(block_size))));
    }
    return sem(block_means);
}

double JackknifeResult::standard_error() const { return std::sqrt(variance); }

JackknifeResult jackknife(double full_estimate, std::vector<double> leave_one_out) {
    require(leave_one_out.size() >= 2, ErrorCode::NotEnoughBatches, "jackknife needs at least two samples");
    const double n = static_cast<double>(leave_one_out.size());
    const double m = mean(leave_one_out);
    double ss = 0.0;
    for (double v : leave_one_out) {
        ss += (v - m) * (v - m);
    }
    JackknifeResult out;
    out.raw_estimate = full_estimate;
    out.point_estimate = n * full_estimate - (n - 1.0) * m;
    out.variance = (n - 1.0) / n * ss;
    out.leave_one_out = std::move(leave_one_out);
    return out;
}

double TraceMomentTerms::estimate() const { return full_sum / falling_factorial(n_batches, order); }

double TraceMomentTerms::leave_one_out(int i) const {
    require(n_batches - 1 >= order, ErrorCode::NotEnoughBatches, "leave-one-out needs at least k batches to remain");
    return (full_sum - containing[static_cast<std::size_t>(i)]) / falling_factorial(n_batches - 1, order);
}

namespace {

std::vector<TraceMomentTerms> walk_tuples(std::span<const MatrixXc> batches, std::span<const int> orders,
                                          bool track_containing) {
    require(!orders.empty(), ErrorCode::InvalidArgument, "no moment orders requested");
    const int n = static_cast<int>(batches.size());
    const int max_order = *std::max_element(orders.begin(), orders.end());
    for (int k : orders) {
        require(k >= 2, ErrorCode::InvalidArgument, "moment orders must be at least 2");
    }
    require(n >= max_order, ErrorCode::NotEnoughBatches,
            std::to_string(n) + " batches cannot form tuples of order " + std::to_string(max_order));
    require(max_order < 4 || n <= 16, ErrorCode::TooLarge, "orders >= 4 are limited to 16 batches");
    for (const auto &b : batches) {
        require(b.rows() == batches.front().rows() && b.cols() == b.rows(), ErrorCode::SizeMismatch,
                "batch shadows must share one square dimension");
    }

    std::vector<TraceMomentTerms> terms;
    std::vector<int> order_slot(static_cast<std::size_t>(max_order) + 2, -1);
    for (int k : orders) {
        if (order_slot[static_cast<std::size_t>(k)] < 0) {
            order_slot[static_cast<std::size_t>(k)] = static_cast<int>(terms.size());
            terms.push_back(TraceMomentTerms{k, n, 0.0, std::vector<double>(static_cast<std::size_t>(n), 0.0)});
        }
    }

    TupleWalker walker{
        batches,         {}, order_slot, max_order, terms, {}, std::vector<bool>(static_cast<std::size_t>(n)),
        track_containing};
    walker.transposed.reserve(batches.size());
    for (const auto &b : batches) {
        walker.transposed.push_back(b.transpose());
    }
    for (int first = 0; first < n; ++first) {
        walker.tuple = {first};
        walker.used.assign(static_cast<std::size_t>(n), false);
        walker.used[static_cast<std::size_t>(first)] = true;
        walker.extend(batches[static_cast<std::size_t>(first)], first);
    }

    std::vector<TraceMomentTerms> out;
    out.reserve(orders.size());
    for (int k : orders) {
        out.push_back(terms[static_cast<std::size_t>(order_slot[static_cast<std::size_t>(k)])]);
    }
    return out;
}

}  // namespace

std::vector<TraceMomentTerms> trace_moment_terms(std::span<const MatrixXc> batches, std::span<const int> orders) {
    return walk_tuples(batches, orders, true);
}

double trace_moment(std::span<const MatrixXc> batches, int order) {
    const int orders[] = {order};
    return walk_tuples(batches, orders, false).front().estimate();
}

MomentJackknife jackknife_moments(const BatchShadowSet &batches, std::span<const int> orders, bool compute_cov) {
    const int n = batches.n_batches();
    require(n >= 2, ErrorCode::NotEnoughBatches, "jackknife needs at least two batches");
    for (int k : orders) {
        require(n >= k + 1, ErrorCode::NotEnoughBatches,
                "jackknife of order " + std::to_string(k) + " needs at least " + std::to_string(k + 1) + " batches");
    }
    if (n < 10) {
        warn("jackknife error bars with fewer than 10 batches (" + std::to_string(n) + ") may be unreliable");
    }
    std::vector<MatrixXc> matrices;
    matrices.reserve(batches.batches.size());
    for (const auto &b : batches.batches) {
        matrices.push_back(b.matrix);
    }
    const auto terms = trace_moment_terms(matrices, orders);

    MomentJackknife out;
    out.orders.assign(orders.begin(), orders.end());
    for (const auto &t : terms) {
        std::vector<double> loo(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            loo[static_cast<std::size_t>(i)] = t.leave_one_out(i);
        }
        out.results.push_back(jackknife(t.estimate(), std::move(loo)));
    }
    if (compute_cov) {
        const auto m = static_cast<Eigen::Index>(out.results.size());
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
        std::vector<double> means;
        for (const auto &r : out.results) {
            means.push_back(mean(r.leave_one_out));
        }
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i) {
                    acc += (out.results[static_cast<std::size_t>(a)].leave_one_out[static_cast<std::size_t>(i)] -
                            means[static_cast<std::size_t>(a)]) *
                           (out.results[static_cast<std::size_t>(b)].leave_one_out[static_cast<std::size_t>(i)] -
                            means[static_cast<std::size_t>(b)]);
                }
                cov(a, b) = (n - 1.0) / n * acc;
            }
        }
        out.covariance = std::move(cov);
    }
    return out;
}

}  // namespace rmkit
