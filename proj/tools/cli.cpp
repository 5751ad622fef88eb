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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rmkit/rmkit.hpp"

namespace rmkit::cli {
namespace {

struct Options {
    int threads = 1;
    std::uint64_t seed = 0;
    std::string out;

    // sample / channel
    int n = 0;
    int nu = 0;
    std::string ensemble = "haar";
    std::string channel_ensemble = "shallow";
    int depth = 0;
    int circuits = 2000;
    std::string estimator = "automatic";

    // simulate
    std::string state;
    std::uint64_t state_seed = 1;
    std::string settings;
    int nm = 0;
    std::optional<double> noise_mean;
    double noise_sd = 0.0;
    std::optional<std::uint64_t> noise_seed;

    // estimate
    std::string group;
    std::string group2;
    std::string task;
    std::vector<std::string> paulis;
    std::string sites;
    std::string orders = "2";
    std::optional<int> batches;
    std::string calibration;
    std::string channel;
    double rcond = 1e-8;
    std::string ideal;
    std::uint64_t ideal_seed = 1;
    bool sem = false;
    bool cov = false;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return kIoError;
        case ErrorCode::CorruptInput: return kCorruptInput;
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidSize:
        case ErrorCode::TooLarge:
        case ErrorCode::TooLargeForDense:
        case ErrorCode::NotUnitary:
        case ErrorCode::InvalidState: return kArgumentError;
        default: return kSemanticMismatch;
    }
}

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc() && ptr == text.data() + text.size(), ErrorCode::InvalidArgument,
            "bad " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

// "2:5" or "3".
std::vector<int> parse_orders(std::string_view text) {
    const auto parts = split(text, ':');
    require(parts.size() <= 2, ErrorCode::InvalidArgument, "orders take the form k or k1:k2");
    const int lo = parse_int(parts.front(), "order");
    const int hi = parts.size() == 2 ? parse_int(parts.back(), "order") : lo;
    require(lo >= 1 && hi >= lo, ErrorCode::InvalidArgument, "empty order range");
    std::vector<int> orders;
    for (int k = lo; k <= hi; ++k) orders.push_back(k);
    return orders;
}

// "1,4" or "2-5" or a mix: "1,3-4".
std::optional<Subsystem> parse_sites(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::vector<int> sites;
    for (const auto item : split(text, ',')) {
        const auto bounds = split(item, '-');
        require(bounds.size() <= 2, ErrorCode::InvalidArgument, "bad site range");
        const int lo = parse_int(bounds.front(), "site");
        const int hi = bounds.size() == 2 ? parse_int(bounds.back(), "site") : lo;
        for (int s = lo; s <= hi; ++s) sites.push_back(s);
    }
    std::sort(sites.begin(), sites.end());
    return Subsystem(std::move(sites));
}

// ghz[:N] | zero[:N] | random-mps:chi | random-pure. N defaults to n_qubits.
QuantumState make_state(std::string_view spec, int n_qubits, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const auto name = spec.substr(0, colon);
    const bool has_arg = colon != std::string_view::npos;
    const int arg = has_arg ? parse_int(spec.substr(colon + 1), "state parameter") : 0;
    Rng rng(RngSeed{seed, 0});
    if (name == "ghz" || name == "zero") {
        const int n = has_arg ? arg : n_qubits;
        require(n == n_qubits, ErrorCode::SizeMismatch,
                "state has " + std::to_string(n) + " qubits but the data has " + std::to_string(n_qubits));
        return name == "ghz" ? ghz_state(n) : product_zero(n);
    }
    if (name == "random-mps") {
        require(has_arg, ErrorCode::InvalidArgument, "random-mps needs a bond dimension, e.g. random-mps:2");
        return random_mps(n_qubits, arg, rng);
    }
    if (name == "random-pure") {
        require(!has_arg, ErrorCode::InvalidArgument, "random-pure takes no parameter");
        return PureStateDense::random(n_qubits, rng);
    }
    fail(ErrorCode::InvalidArgument, "unknown state '" + std::string(spec) + "'");
}

void print_table(std::ostream &out, const std::vector<io::ResultRow> &rows) {
    const std::vector<std::string> headers = {"name", "value", "±2σ", "σ", "N_U", "N_M", "N_B"};
    std::vector<std::vector<std::string>> cells;
    const auto num = [](double v) {
        std::ostringstream s;
        s << std::setprecision(6) << v;
        return s.str();
    };
    for (const auto &r : rows) {
        cells.push_back({r.name, num(r.value), r.sigma ? num(2.0 * *r.sigma) : "-", r.sigma ? num(*r.sigma) : "-",
                         std::to_string(r.n_settings), std::to_string(r.n_shots),
                         r.n_batches > 0 ? std::to_string(r.n_batches) : "-"});
    }
    std::vector<std::size_t> width(headers.size());
    // "±" and "σ" are two bytes each in UTF-8 but one column wide.
    const auto columns = [](const std::string &s) {
        return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
    };
    for (std::size_t c = 0; c < headers.size(); ++c) {
        width[c] = columns(headers[c]);
        for (const auto &row : cells) width[c] = std::max(width[c], columns(row[c]));
    }
    const auto line = [&](const std::vector<std::string> &row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string pad(width[c] - columns(row[c]), ' ');
            if (c == 0) {
                out << row[c] << pad;
            } else {
                out << "  " << pad << row[c];
            }
        }
        out << '\n';
    };
    line(headers);
    for (const auto &row : cells) line(row);
}

void emit(const Options &o, std::ostream &out, const std::vector<io::ResultRow> &rows) {
    print_table(out, rows);
    if (!o.out.empty()) io::write_results(o.out, rows);
}

int cmd_sample(const Options &o, std::ostream &out) {
    require(o.n >= 1 && o.nu >= 1, ErrorCode::InvalidArgument, "--n and --nu must be positive");
    const auto ensemble = parse_ensemble(o.ensemble);
    const auto settings = sample_settings(ensemble, o.n, o.nu, RngSeed{o.seed, 0}, o.depth);
    io::write_settings(o.out, settings);
    out << "wrote " << settings.size() << " " << to_string(ensemble) << " settings on " << o.n << " qubits to " << o.out
        << '\n';
    return kSuccess;
}

int cmd_simulate(const Options &o, std::ostream &out) {
    require(o.nm >= 1, ErrorCode::InvalidArgument, "--nm must be positive");
    const auto settings = io::read_settings(o.settings);
    const int n = n_qubits(settings.front());
    const QuantumState state = make_state(o.state, n, o.state_seed);
    std::optional<NoiseModel> noise;
    if (o.noise_mean) {
        Rng rng(RngSeed{o.noise_seed.value_or(o.seed), 1});
        noise = NoiseModel::random(n, *o.noise_mean, o.noise_sd, rng);
    }
    const auto group = simulate_group(state, settings, o.nm, noise, RngSeed{o.seed, 2});
    io::write_group(o.out, group);
    out << "wrote " << group.n_settings() << " settings x " << group.n_shots() << " shots on " << n << " qubits to "
        << o.out << '\n';
    return kSuccess;
}

int cmd_channel(const Options &o, std::ostream &out) {
    const EnsembleSpec spec{parse_channel_ensemble(o.channel_ensemble == "haar" ? "local-haar" : o.channel_ensemble),
                            o.n, o.depth};
    Rng rng(RngSeed{o.seed, 3});
    const auto channel = estimate_channel(spec, o.circuits, rng, parse_channel_estimator(o.estimator));
    const auto inverse = invert_channel(channel, o.rcond);
    io::write_channel(o.out, channel);
    out << "wrote " << to_string(spec.kind) << " channel (" << to_string(channel.estimator) << ", N=" << spec.n_qubits
        << ", depth=" << spec.depth << ", circuits=" << o.circuits << ", rank=" << inverse.rank
        << ", condition=" << std::setprecision(4) << inverse.condition_number << ") to " << o.out << '\n';
    return kSuccess;
}

bool is_shallow(const MeasurementGroup &group) {
    return std::holds_alternative<ShallowCircuitSetting>(group[0].setting());
}

std::optional<CalibrationVector> load_calibration(const Options &o, int n_qubits,
                                                  const std::optional<Subsystem> &sites) {
    if (o.calibration.empty()) return std::nullopt;
    const auto cal_group = io::read_group(o.calibration);
    require(cal_group.n_qubits() == n_qubits, ErrorCode::SizeMismatch,
            "calibration data and measurement data differ in qubit count");
    auto g = calibration_vector(product_zero(n_qubits), cal_group);
    return sites ? g.reduced(*sites) : g;
}

InverseChannel load_inverse(const Options &o) {
    require(!o.channel.empty(), ErrorCode::InvalidArgument, "shallow data needs --channel");
    return invert_channel(io::read_channel(o.channel), o.rcond);
}

int default_batches(const MeasurementGroup &group) { return std::min(group.n_settings(), 10); }

std::vector<io::ResultRow> task_expect(const Options &o, const MeasurementGroup &full,
                                       const std::optional<Subsystem> &sites) {
    require(!o.paulis.empty(), ErrorCode::InvalidArgument, "--task expect needs at least one --pauli");
    std::vector<io::ResultRow> rows;
    if (is_shallow(full)) {
        require(!sites, ErrorCode::NotSupportedOnSubsystem, "--sites is not supported for shallow data");
        require(o.calibration.empty(), ErrorCode::InvalidArgument, "--calibration does not apply to shallow data");
        const auto means = shallow_batch_shadows(full, load_inverse(o), full.n_settings());
        for (const auto &p : o.paulis) {
            const auto est = expect_shadow(PauliObservable::parse(p), means.batches, o.sem);
            rows.push_back({"<" + p + ">", est.value, est.sem, full.n_settings(), full.n_shots(), 0});
        }
        return rows;
    }
    const auto group = sites ? reduce_to_subsystem(full, *sites) : full;
    const auto shadows = factorized_shadows(group, load_calibration(o, full.n_qubits(), sites));
    for (const auto &p : o.paulis) {
        const auto est = expect_shadow(PauliObservable::parse(p), shadows, o.sem, group.n_shots());
        rows.push_back({"<" + p + ">", est.value, est.sem, group.n_settings(), group.n_shots(), 0});
    }
    return rows;
}

std::vector<io::ResultRow> task_moments(const Options &o, const MeasurementGroup &full,
                                        const std::optional<Subsystem> &sites) {
    const auto orders = parse_orders(o.orders);
    const int n_batches = o.batches.value_or(default_batches(full));
    BatchShadowSet batches;
    if (is_shallow(full)) {
        require(!sites, ErrorCode::NotSupportedOnSubsystem, "--sites is not supported for shallow data");
        require(o.calibration.empty(), ErrorCode::InvalidArgument, "--calibration does not apply to shallow data");
        batches = shallow_batch_shadows(full, load_inverse(o), n_batches);
    } else {
        const auto group = sites ? reduce_to_subsystem(full, *sites) : full;
        batches = dense_batch_shadows(group, n_batches, load_calibration(o, full.n_qubits(), sites));
    }
    const auto estimates = trace_moments(batches, orders, o.sem);
    std::vector<io::ResultRow> rows;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        rows.push_back({"p" + std::to_string(orders[i]), estimates[i].value, estimates[i].sem, full.n_settings(),
                        full.n_shots(), n_batches});
    }
    if (o.cov) {
        const auto jk = jackknife_moments(batches, orders, true);
        for (std::size_t a = 0; a < orders.size(); ++a) {
            for (std::size_t b = a; b < orders.size(); ++b) {
                rows.push_back({"cov(p" + std::to_string(orders[a]) + ",p" + std::to_string(orders[b]) + ")",
                                (*jk.covariance)(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)),
                                std::nullopt, full.n_settings(), full.n_shots(), n_batches});
            }
        }
    }
    return rows;
}

std::vector<io::ResultRow> task_direct(const Options &o, const MeasurementGroup &full,
                                       const std::optional<Subsystem> &sites) {
    require(o.calibration.empty(), ErrorCode::InvalidArgument, "--calibration applies to shadow tasks only");
    const auto group = sites ? reduce_to_subsystem(full, *sites) : full;
    if (o.task == "purity") {
        const auto est = purity_direct(group, o.sem);
        return {{"purity", est.value, est.sem, group.n_settings(), group.n_shots(), 0}};
    }
    require(!o.group2.empty(), ErrorCode::InvalidArgument, "--task " + o.task + " needs --group2");
    const auto second_full = io::read_group(o.group2);
    const auto second = sites ? reduce_to_subsystem(second_full, *sites) : second_full;
    const auto est =
        o.task == "overlap" ? overlap_direct(group, second, o.sem) : cross_platform_fidelity(group, second, o.sem);
    return {{o.task, est.value, est.sem, group.n_settings(), group.n_shots(), 0}};
}

std::vector<io::ResultRow> task_xeb(const Options &o, const MeasurementGroup &group) {
    require(!o.ideal.empty(), ErrorCode::InvalidArgument, "--task xeb needs --ideal");
    const QuantumState ideal = make_state(o.ideal, group.n_qubits(), o.ideal_seed);
    std::vector<double> per_setting;
    for (const auto &e : group.entries()) per_setting.push_back(xeb(ideal, e));
    const double value = mean(per_setting);
    std::optional<double> sigma;
    if (o.sem && per_setting.size() >= 2) sigma = rmkit::sem(per_setting);
    const double self = self_xeb(ideal);
    std::vector<io::ResultRow> rows = {{"xeb", value, sigma, group.n_settings(), group.n_shots(), 0},
                                       {"self_xeb", self, std::nullopt, group.n_settings(), group.n_shots(), 0}};
    if (self != 0.0) {
        std::optional<double> ratio_sigma;
        if (sigma) ratio_sigma = *sigma / std::abs(self);
        rows.push_back({"xeb/self_xeb", value / self, ratio_sigma, group.n_settings(), group.n_shots(), 0});
    }
    return rows;
}

int cmd_estimate(const Options &o, std::ostream &out) {
    const auto group = io::read_group(o.group);
    const auto sites = parse_sites(o.sites);
    if (sites) sites->check_within(group.n_qubits());
    require(!o.cov || o.task == "moments", ErrorCode::InvalidArgument, "--cov applies to --task moments");
    std::vector<io::ResultRow> rows;
    if (o.task == "expect") {
        rows = task_expect(o, group, sites);
    } else if (o.task == "moments") {
        rows = task_moments(o, group, sites);
    } else if (o.task == "purity" || o.task == "overlap" || o.task == "fidelity") {
        rows = task_direct(o, group, sites);
    } else if (o.task == "xeb") {
        require(!sites, ErrorCode::InvalidArgument, "--sites does not apply to xeb");
        rows = task_xeb(o, group);
    } else {
        fail(ErrorCode::InvalidArgument, "unknown task '" + o.task + "'");
    }
    emit(o, out, rows);
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Randomized-measurement toolkit: sample settings, simulate data, estimate properties."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "rmkit 0.1.0");
    app.add_option("--threads", o.threads, "Worker threads")->envname("RMKIT_THREADS")->check(CLI::PositiveNumber);

    auto *sample = app.add_subcommand("sample", "Draw measurement settings");
    sample->add_option("--n", o.n, "Qubit count")->required();
    sample->add_option("--nu", o.nu, "Number of settings")->required();
    sample->add_option("--ensemble", o.ensemble, "haar | pauli | computational | shallow")->capture_default_str();
    sample->add_option("--depth", o.depth, "Circuit depth for the shallow ensemble")->check(CLI::NonNegativeNumber);
    sample->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    sample->add_option("--out", o.out, "Settings manifest to write")->required();

    auto *simulate = app.add_subcommand("simulate", "Simulate measurement outcomes");
    simulate->add_option("--state", o.state, "ghz[:N] | zero[:N] | random-mps:chi | random-pure")->required();
    simulate->add_option("--state-seed", o.state_seed, "Seed for random states")->capture_default_str();
    simulate->add_option("--settings", o.settings, "Settings manifest")->required();
    simulate->add_option("--nm", o.nm, "Shots per setting")->required();
    simulate->add_option("--noise-mean", o.noise_mean, "Mean per-qubit readout depolarization");
    simulate->add_option("--noise-sd", o.noise_sd, "Standard deviation of the depolarization")->capture_default_str();
    simulate->add_option("--noise-seed", o.noise_seed, "Seed for the noise strengths (defaults to --seed)");
    simulate->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    simulate->add_option("--out", o.out, "Group manifest to write")->required();

    auto *channel = app.add_subcommand("channel", "Learn a shadow measurement channel");
    channel->add_option("--n", o.n, "Qubit count")->required();
    channel->add_option("--depth", o.depth, "Circuit depth")->check(CLI::NonNegativeNumber);
    channel->add_option("--ensemble", o.channel_ensemble, "shallow | local-haar")->capture_default_str();
    channel->add_option("--circuits", o.circuits, "Training circuits")->capture_default_str();
    channel->add_option("--estimator", o.estimator, "automatic | direct | pauli-twirled")->capture_default_str();
    channel->add_option("--rcond", o.rcond, "Relative singular-value cutoff")->capture_default_str();
    channel->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    channel->add_option("--out", o.out, "Channel manifest to write")->required();

    auto *estimate = app.add_subcommand("estimate", "Estimate properties from measurement data");
    estimate->add_option("--group", o.group, "Group manifest")->required();
    estimate->add_option("--group2", o.group2, "Second group manifest (overlap, fidelity)");
    estimate->add_option("--task", o.task, "expect | moments | purity | overlap | fidelity | xeb")->required();
    estimate->add_option("--pauli", o.paulis, "Pauli string, e.g. ZIIX (repeatable)");
    estimate->add_option("--sites", o.sites, "Subsystem, e.g. 1,4 or 1-3");
    estimate->add_option("--k", o.orders, "Moment orders, e.g. 2:5")->capture_default_str();
    estimate->add_option("--batches", o.batches, "Number of batch shadows");
    estimate->add_option("--calibration", o.calibration, "Calibration group measured on |0...0>");
    estimate->add_option("--channel", o.channel, "Channel manifest for shallow data");
    estimate->add_option("--rcond", o.rcond, "Relative singular-value cutoff")->capture_default_str();
    estimate->add_option("--ideal", o.ideal, "Ideal state for xeb (same forms as --state)");
    estimate->add_option("--ideal-seed", o.ideal_seed, "Seed of the ideal random state")->capture_default_str();
    estimate->add_flag("--sem", o.sem, "Report standard errors");
    estimate->add_flag("--cov", o.cov, "Report the jackknife covariance of the moments");
    estimate->add_option("--out", o.out, "Optional results manifest");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion &) {
        out << "rmkit 0.1.0\n";
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kArgumentError;
    }

    set_thread_count(o.threads);
    auto previous = set_warning_handler([&err](std::string_view message) { err << "warning: " << message << '\n'; });
    int code = kSuccess;
    try {
        if (sample->parsed()) {
            code = cmd_sample(o, out);
        } else if (simulate->parsed()) {
            code = cmd_simulate(o, out);
        } else if (channel->parsed()) {
            code = cmd_channel(o, out);
        } else {
            code = cmd_estimate(o, out);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        code = exit_code_for(e.code());
    }
    set_warning_handler(std::move(previous));
    return code;
}

}  // namespace rmkit::cli
