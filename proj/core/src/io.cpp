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

#include "rmkit/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmkit/error.hpp"

namespace rmkit::io {
namespace {

using nlohmann::json;

// Little-endian byte buffer with named sections.
class PayloadWriter {
  public:
    void begin(std::string name) {
        close_section();
        name_ = std::move(name);
        start_ = bytes_.size();
    }

    void u32(std::uint32_t v) { put(v); }
    void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v)); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
    void c128(const Complex &z) {
        f64(z.real());
        f64(z.imag());
    }
    void byte(std::uint8_t v) { bytes_.push_back(v); }

    // Row-major.
    template <typename Matrix>
    void matrix(const Matrix &m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if constexpr (std::is_same_v<typename Matrix::Scalar, Complex>) {
                    c128(m(r, c));
                } else {
                    f64(m(r, c));
                }
            }
        }
    }

    json sections() {
        close_section();
        return sections_;
    }
    const std::vector<std::uint8_t> &bytes() const { return bytes_; }

  private:
    template <typename U>
    void put(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    void close_section() {
        if (!name_.empty()) {
            sections_[name_] = {{"offset", start_}, {"bytes", bytes_.size() - start_}};
            name_.clear();
        }
    }

    std::vector<std::uint8_t> bytes_;
    json sections_ = json::object();
    std::string name_;
    std::size_t start_ = 0;
};

class PayloadReader {
  public:
    PayloadReader(std::vector<std::uint8_t> bytes, json sections)
        : bytes_(std::move(bytes)), sections_(std::move(sections)) {
        require(sections_.is_object(), ErrorCode::CorruptInput, "manifest sections must be an object");
        std::size_t total = 0;
        for (const auto &[name, s] : sections_.items()) {
            const auto offset = s.at("offset").get<std::size_t>();
            const auto length = s.at("bytes").get<std::size_t>();
            require(offset <= bytes_.size() && length <= bytes_.size() - offset, ErrorCode::CorruptInput,
                    "section '" + name + "' exceeds the payload");
            total += length;
        }
        require(total == bytes_.size(), ErrorCode::CorruptInput, "payload length differs from declared sections");
    }

    // Positions the cursor at a section whose length must equal `expected`.
    void begin(const std::string &name, std::size_t expected) {
        require(sections_.contains(name), ErrorCode::CorruptInput, "missing payload section '" + name + "'");
        const auto &s = sections_.at(name);
        pos_ = s.at("offset").get<std::size_t>();
        end_ = pos_ + s.at("bytes").get<std::size_t>();
        require(end_ - pos_ == expected, ErrorCode::CorruptInput,
                "section '" + name + "' has " + std::to_string(end_ - pos_) + " bytes, expected " +
                    std::to_string(expected));
    }

    std::uint32_t u32() { return get<std::uint32_t>(); }
    std::int32_t i32() { return static_cast<std::int32_t>(get<std::uint32_t>()); }
    double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
    Complex c128() {
        const double re = f64();
        return {re, f64()};
    }
    std::uint8_t byte() {
        require(pos_ < end_, ErrorCode::CorruptInput, "payload section truncated");
        return bytes_[pos_++];
    }

    MatrixXc complex_matrix(Eigen::Index rows, Eigen::Index cols) {
        MatrixXc m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                m(r, c) = c128();
            }
        }
        return m;
    }

  private:
    template <typename U>
    U get() {
        require(end_ - pos_ >= sizeof(U), ErrorCode::CorruptInput, "payload section truncated");
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += sizeof(U);
        return v;
    }

    std::vector<std::uint8_t> bytes_;
    json sections_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
};

void write_file(const std::filesystem::path &path, const void *data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out.write(static_cast<const char *>(data), static_cast<std::streamsize>(size));
    out.close();
    require(!out.fail(), ErrorCode::IoError, "failed writing " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(!in.bad(), ErrorCode::IoError, "failed reading " + path.string());
    return bytes;
}

void write_bundle(const std::filesystem::path &manifest, json header, PayloadWriter &payload) {
    const auto payload_path = payload_path_for(manifest);
    header["format_version"] = kFormatVersion;
    header["endianness"] = "little";
    header["payload"] = payload_path.filename().string();
    header["sections"] = payload.sections();
    write_file(payload_path, payload.bytes().data(), payload.bytes().size());
    const std::string text = header.dump(2) + "\n";
    write_file(manifest, text.data(), text.size());
}

struct Bundle {
    json header;
    PayloadReader payload;
};

Bundle read_bundle(const std::filesystem::path &manifest, std::string_view kind) {
    const auto raw = read_file(manifest);
    json header;
    try {
        header = json::parse(raw.begin(), raw.end());
    } catch (const json::exception &e) {
        fail(ErrorCode::CorruptInput, manifest.string() + ": " + e.what());
    }
    try {
        require(header.is_object(), ErrorCode::CorruptInput, "manifest must be a JSON object");
        require(header.at("format_version").get<int>() == kFormatVersion, ErrorCode::CorruptInput,
                "unsupported format_version");
        require(header.at("endianness").get<std::string>() == "little", ErrorCode::CorruptInput,
                "unsupported endianness");
        require(header.at("kind").get<std::string>() == kind, ErrorCode::CorruptInput,
                manifest.string() + " is not a " + std::string(kind) + " file");
        const auto name = header.at("payload").get<std::string>();
        require(!name.empty() && std::filesystem::path(name).filename() == name, ErrorCode::CorruptInput,
                "payload must name a file next to the manifest");
        auto bytes = read_file(manifest.parent_path() / name);
        PayloadReader reader(std::move(bytes), header.at("sections"));
        return {std::move(header), std::move(reader)};
    } catch (const json::exception &e) {
        fail(ErrorCode::CorruptInput, manifest.string() + ": " + e.what());
    }
}

std::string setting_kind(const MeasurementSetting &s) {
    if (std::holds_alternative<LocalUnitarySetting>(s)) return "local";
    if (std::holds_alternative<ComputationalBasisSetting>(s)) return "computational";
    return "shallow";
}

json settings_header(std::span<const MeasurementSetting> settings, std::string_view kind) {
    require(!settings.empty(), ErrorCode::InvalidArgument, "nothing to write");
    const int n = n_qubits(settings.front());
    const std::string skind = setting_kind(settings.front());
    for (const auto &s : settings) {
        require(n_qubits(s) == n, ErrorCode::SizeMismatch, "settings differ in qubit count");
        require(setting_kind(s) == skind, ErrorCode::InvalidArgument, "settings must share one kind per file");
    }
    return {{"kind", kind}, {"n_qubits", n}, {"n_settings", settings.size()}, {"setting_kind", skind}};
}

void write_setting_sections(std::span<const MeasurementSetting> settings, PayloadWriter &payload) {
    const std::string kind = setting_kind(settings.front());
    if (kind == "local") {
        payload.begin("unitaries");
        for (const auto &s : settings) {
            for (const auto &u : std::get<LocalUnitarySetting>(s).unitaries()) {
                payload.matrix(u);
            }
        }
    } else if (kind == "shallow") {
        payload.begin("depths");
        for (const auto &s : settings)
            payload.u32(static_cast<std::uint32_t>(std::get<ShallowCircuitSetting>(s).depth()));
        payload.begin("gate_counts");
        for (const auto &s : settings) {
            payload.u32(static_cast<std::uint32_t>(std::get<ShallowCircuitSetting>(s).gates().size()));
        }
        payload.begin("gate_sites");
        for (const auto &s : settings) {
            for (const auto &g : std::get<ShallowCircuitSetting>(s).gates()) {
                payload.i32(g.sites[0]);
                payload.i32(g.sites.size() == 2 ? g.sites[1] : 0);
            }
        }
        payload.begin("gate_unitaries");
        for (const auto &s : settings) {
            for (const auto &g : std::get<ShallowCircuitSetting>(s).gates()) payload.matrix(g.unitary);
        }
    }
}

template <typename T>
T field(const json &header, const char *name) {
    try {
        return header.at(name).get<T>();
    } catch (const json::exception &e) {
        fail(ErrorCode::CorruptInput, std::string("manifest field '") + name + "': " + e.what());
    }
}

int positive_field(const json &header, const char *name) {
    const auto v = field<std::int64_t>(header, name);
    require(v >= 1 && v <= std::numeric_limits<int>::max(), ErrorCode::CorruptInput,
            std::string("manifest field '") + name + "' out of range");
    return static_cast<int>(v);
}

// Construction errors on decoded content mean the file is corrupt.
template <typename F>
auto decode(F &&f) {
    try {
        return f();
    } catch (const Error &e) {
        if (e.code() == ErrorCode::CorruptInput || e.code() == ErrorCode::IoError) throw;
        fail(ErrorCode::CorruptInput, std::string("invalid content: ") + e.what());
    }
}

std::vector<MeasurementSetting> read_setting_sections(const json &header, PayloadReader &payload) {
    const int n = positive_field(header, "n_qubits");
    const int n_settings = positive_field(header, "n_settings");
    const auto kind = field<std::string>(header, "setting_kind");
    const auto count = static_cast<std::size_t>(n_settings);
    std::vector<MeasurementSetting> out;
    out.reserve(count);
    if (kind == "computational") {
        for (std::size_t j = 0; j < count; ++j) out.emplace_back(decode([&] { return ComputationalBasisSetting(n); }));
    } else if (kind == "local") {
        payload.begin("unitaries", count * static_cast<std::size_t>(n) * 4 * 16);
        for (std::size_t j = 0; j < count; ++j) {
            std::vector<Mat2> us(static_cast<std::size_t>(n));
            for (auto &u : us) u = payload.complex_matrix(2, 2);
            out.emplace_back(decode([&] { return LocalUnitarySetting(std::move(us)); }));
        }
    } else if (kind == "shallow") {
        payload.begin("depths", count * 4);
        std::vector<int> depths(count);
        for (auto &d : depths) d = static_cast<int>(payload.u32());
        payload.begin("gate_counts", count * 4);
        std::vector<std::size_t> counts(count);
        std::size_t total = 0;
        for (auto &c : counts) {
            c = payload.u32();
            total += c;
        }
        payload.begin("gate_sites", total * 8);
        std::vector<std::vector<Gate>> gates(count);
        std::size_t unitary_bytes = 0;
        for (std::size_t j = 0; j < count; ++j) {
            for (std::size_t g = 0; g < counts[j]; ++g) {
                Gate gate;
                const int a = payload.i32();
                const int b = payload.i32();
                gate.sites = b == 0 ? std::vector<int>{a} : std::vector<int>{a, b};
                unitary_bytes += (b == 0 ? 4 : 16) * 16;
                gates[j].push_back(std::move(gate));
            }
        }
        payload.begin("gate_unitaries", unitary_bytes);
        for (std::size_t j = 0; j < count; ++j) {
            for (auto &gate : gates[j]) {
                const Eigen::Index dim = gate.sites.size() == 1 ? 2 : 4;
                gate.unitary = payload.complex_matrix(dim, dim);
            }
            out.emplace_back(decode([&] { return ShallowCircuitSetting(n, depths[j], std::move(gates[j])); }));
        }
    } else {
        fail(ErrorCode::CorruptInput, "unknown setting_kind '" + kind + "'");
    }
    return out;
}

}  // namespace

std::filesystem::path payload_path_for(const std::filesystem::path &manifest) {
    auto p = manifest;
    p.replace_extension(".bin");
    require(p != manifest, ErrorCode::InvalidArgument, "manifest path must not end in .bin");
    return p;
}

void write_settings(const std::filesystem::path &manifest, std::span<const MeasurementSetting> settings) {
    json header = settings_header(settings, "settings");
    PayloadWriter payload;
    write_setting_sections(settings, payload);
    write_bundle(manifest, std::move(header), payload);
}

std::vector<MeasurementSetting> read_settings(const std::filesystem::path &manifest) {
    auto bundle = read_bundle(manifest, "settings");
    return read_setting_sections(bundle.header, bundle.payload);
}

void write_group(const std::filesystem::path &manifest, const MeasurementGroup &group) {
    std::vector<MeasurementSetting> settings;
    settings.reserve(group.entries().size());
    for (const auto &e : group.entries()) settings.push_back(e.setting());
    json header = settings_header(settings, "group");
    header["n_shots"] = group.n_shots();
    PayloadWriter payload;
    write_setting_sections(settings, payload);
    payload.begin("outcomes");
    for (const auto &e : group.entries()) {
        for (const auto b : e.outcomes().bits()) payload.byte(b);
    }
    write_bundle(manifest, std::move(header), payload);
}

MeasurementGroup read_group(const std::filesystem::path &manifest) {
    auto bundle = read_bundle(manifest, "group");
    auto settings = read_setting_sections(bundle.header, bundle.payload);
    const int n = positive_field(bundle.header, "n_qubits");
    const int n_shots = positive_field(bundle.header, "n_shots");
    const std::size_t per_setting = static_cast<std::size_t>(n_shots) * static_cast<std::size_t>(n);
    bundle.payload.begin("outcomes", per_setting * settings.size());
    std::vector<MeasurementData> entries;
    entries.reserve(settings.size());
    for (auto &s : settings) {
        std::vector<std::uint8_t> bits(per_setting);
        for (auto &b : bits) b = bundle.payload.byte();
        entries.push_back(decode([&] { return MeasurementData(std::move(s), Outcomes(n_shots, n, std::move(bits))); }));
    }
    return decode([&] { return MeasurementGroup(std::move(entries)); });
}

void write_channel(const std::filesystem::path &manifest, const DenseChannel &channel) {
    const Eigen::Index d2 = static_cast<Eigen::Index>(channel.dim()) * channel.dim();
    require(channel.superoperator.rows() == d2 && channel.superoperator.cols() == d2, ErrorCode::SizeMismatch,
            "superoperator does not match the ensemble size");
    require(channel.standard_error.rows() == d2 && channel.standard_error.cols() == d2, ErrorCode::SizeMismatch,
            "standard error does not match the ensemble size");
    json header = {{"kind", "channel"},
                   {"ensemble", std::string(to_string(channel.ensemble.kind))},
                   {"estimator", std::string(to_string(channel.estimator))},
                   {"n_qubits", channel.ensemble.n_qubits},
                   {"depth", channel.ensemble.depth},
                   {"n_circuits", channel.n_circuits}};
    PayloadWriter payload;
    payload.begin("superoperator");
    payload.matrix(channel.superoperator);
    payload.begin("standard_error");
    payload.matrix(channel.standard_error);
    write_bundle(manifest, std::move(header), payload);
}

DenseChannel read_channel(const std::filesystem::path &manifest) {
    auto bundle = read_bundle(manifest, "channel");
    DenseChannel out;
    out.ensemble.kind = decode([&] { return parse_channel_ensemble(field<std::string>(bundle.header, "ensemble")); });
    out.estimator = decode([&] { return parse_channel_estimator(field<std::string>(bundle.header, "estimator")); });
    out.ensemble.n_qubits = positive_field(bundle.header, "n_qubits");
    require(out.ensemble.n_qubits <= kMaxChannelQubits, ErrorCode::CorruptInput, "channel too large");
    out.ensemble.depth = field<int>(bundle.header, "depth");
    require(out.ensemble.depth >= 0, ErrorCode::CorruptInput, "negative depth");
    out.n_circuits = positive_field(bundle.header, "n_circuits");
    const Eigen::Index d2 = static_cast<Eigen::Index>(out.dim()) * out.dim();
    const auto entries = static_cast<std::size_t>(d2 * d2);
    bundle.payload.begin("superoperator", entries * 16);
    out.superoperator = bundle.payload.complex_matrix(d2, d2);
    bundle.payload.begin("standard_error", entries * 8);
    out.standard_error.resize(d2, d2);
    for (Eigen::Index r = 0; r < d2; ++r) {
        for (Eigen::Index c = 0; c < d2; ++c) out.standard_error(r, c) = bundle.payload.f64();
    }
    return out;
}

void write_results(const std::filesystem::path &manifest, std::span<const ResultRow> rows) {
    json list = json::array();
    PayloadWriter payload;
    payload.begin("values");
    for (const auto &row : rows) {
        list.push_back({{"name", row.name},
                        {"n_settings", row.n_settings},
                        {"n_shots", row.n_shots},
                        {"n_batches", row.n_batches}});
        payload.f64(row.value);
        payload.f64(row.sigma.value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    write_bundle(manifest, {{"kind", "results"}, {"rows", std::move(list)}}, payload);
}

std::vector<ResultRow> read_results(const std::filesystem::path &manifest) {
    auto bundle = read_bundle(manifest, "results");
    const auto list = field<json>(bundle.header, "rows");
    require(list.is_array(), ErrorCode::CorruptInput, "rows must be an array");
    bundle.payload.begin("values", list.size() * 16);
    std::vector<ResultRow> out;
    for (const auto &item : list) {
        ResultRow row;
        row.name = field<std::string>(item, "name");
        row.n_settings = field<int>(item, "n_settings");
        row.n_shots = field<int>(item, "n_shots");
        row.n_batches = field<int>(item, "n_batches");
        row.value = bundle.payload.f64();
        const double sigma = bundle.payload.f64();
        if (!std::isnan(sigma)) row.sigma = sigma;
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace rmkit::io
