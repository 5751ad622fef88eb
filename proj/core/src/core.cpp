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

#include "rmkit/core.hpp"

#include <cmath>

#include "gate_kernels.hpp"
#include "rmkit/error.hpp"

namespace rmkit {

Subsystem::Subsystem(std::vector<int> sites) : sites_(std::move(sites)) {
    require(!sites_.empty(), ErrorCode::InvalidSubsystem, "subsystem must contain at least one site");
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        require(sites_[i] >= 1, ErrorCode::InvalidSubsystem, "site indices are 1-based");
        require(i == 0 || sites_[i] > sites_[i - 1], ErrorCode::InvalidSubsystem, "sites must be strictly increasing");
    }
}

Subsystem Subsystem::range(int first, int last) {
    require(first >= 1 && last >= first, ErrorCode::InvalidSubsystem, "invalid site range");
    std::vector<int> sites;
    for (int s = first; s <= last; ++s) {
        sites.push_back(s);
    }
    return Subsystem(std::move(sites));
}

void Subsystem::check_within(int n_qubits) const {
    require(sites_.back() <= n_qubits, ErrorCode::InvalidSubsystem,
            "site " + std::to_string(sites_.back()) + " exceeds qubit count " + std::to_string(n_qubits));
}

LocalUnitarySetting::LocalUnitarySetting(std::vector<Mat2> unitaries) : unitaries_(std::move(unitaries)) {
    require(!unitaries_.empty(), ErrorCode::InvalidSize, "setting needs at least one qubit");
    for (const auto &u : unitaries_) {
        require(is_unitary(u), ErrorCode::NotUnitary, "site unitary violates the 1e-12 unitarity tolerance");
    }
}

bool operator==(const LocalUnitarySetting &a, const LocalUnitarySetting &b) {
    if (a.unitaries_.size() != b.unitaries_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.unitaries_.size(); ++i) {
        if (a.unitaries_[i] != b.unitaries_[i]) {
            return false;
        }
    }
    return true;
}

ComputationalBasisSetting::ComputationalBasisSetting(int n_qubits) : n_qubits_(n_qubits) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "setting needs at least one qubit");
}

bool operator==(const Gate &a, const Gate &b) {
    return a.sites == b.sites && a.unitary.rows() == b.unitary.rows() && a.unitary.cols() == b.unitary.cols() &&
           a.unitary == b.unitary;
}

ShallowCircuitSetting::ShallowCircuitSetting(int n_qubits, int depth, std::vector<Gate> gates)
    : n_qubits_(n_qubits), depth_(depth), gates_(std::move(gates)) {
    require(n_qubits >= 1, ErrorCode::InvalidSize, "setting needs at least one qubit");
    require(depth >= 0, ErrorCode::InvalidArgument, "depth must be non-negative");
    for (const auto &g : gates_) {
        require(g.sites.size() == 1 || g.sites.size() == 2, ErrorCode::InvalidArgument,
                "gates act on one or two sites");
        for (int s : g.sites) {
            require(s >= 1 && s <= n_qubits, ErrorCode::InvalidSubsystem, "gate site out of range");
        }
        const auto dim = static_cast<Eigen::Index>(pow2(static_cast<int>(g.sites.size())));
        require(g.unitary.rows() == dim && g.unitary.cols() == dim, ErrorCode::SizeMismatch,
                "gate matrix does not match its arity");
        if (g.sites.size() == 2) {
            require(std::abs(g.sites[0] - g.sites[1]) == 1, ErrorCode::InvalidArgument,
                    "two-qubit gates must act on nearest neighbours");
        }
        require(is_unitary(g.unitary), ErrorCode::NotUnitary, "gate violates the 1e-12 unitarity tolerance");
    }
}

bool operator==(const ShallowCircuitSetting &a, const ShallowCircuitSetting &b) {
    return a.n_qubits_ == b.n_qubits_ && a.depth_ == b.depth_ && a.gates_ == b.gates_;
}

int n_qubits(const MeasurementSetting &setting) {
    return std::visit([](const auto &s) { return s.n_qubits(); }, setting);
}

bool is_local(const MeasurementSetting &setting) { return !std::holds_alternative<ShallowCircuitSetting>(setting); }

std::vector<Mat2> local_unitaries(const MeasurementSetting &setting) {
    if (const auto *local = std::get_if<LocalUnitarySetting>(&setting)) {
        return local->unitaries();
    }
    if (const auto *comp = std::get_if<ComputationalBasisSetting>(&setting)) {
        return std::vector<Mat2>(static_cast<std::size_t>(comp->n_qubits()), Mat2::Identity());
    }
    fail(ErrorCode::UnsupportedSetting, "shallow-circuit settings are not product-form");
}

MatrixXc dense_unitary(const MeasurementSetting &setting) {
    const int n = n_qubits(setting);
    require(n <= 12, ErrorCode::TooLargeForDense, "dense setting unitaries are limited to 12 qubits");
    const auto dim = static_cast<Eigen::Index>(pow2(n));
    if (std::holds_alternative<ComputationalBasisSetting>(setting)) {
        return MatrixXc::Identity(dim, dim);
    }
    if (const auto *local = std::get_if<LocalUnitarySetting>(&setting)) {
        std::vector<MatrixXc> factors(local->unitaries().begin(), local->unitaries().end());
        return kron_all(factors);
    }
    const auto &shallow = std::get<ShallowCircuitSetting>(setting);
    MatrixXc u = MatrixXc::Identity(dim, dim);
    for (const auto &g : shallow.gates()) {
        detail::apply_gate_to_columns(u, n, g);
    }
    return u;
}

Outcomes::Outcomes(int n_shots, int n_qubits, std::vector<std::uint8_t> bits)
    : n_shots_(n_shots), n_qubits_(n_qubits), bits_(std::move(bits)) {
    require(n_shots >= 1, ErrorCode::InvalidSize, "at least one shot is required");
    require(n_qubits >= 1, ErrorCode::InvalidSize, "at least one qubit is required");
    require(bits_.size() == static_cast<std::size_t>(n_shots) * static_cast<std::size_t>(n_qubits),
            ErrorCode::SizeMismatch, "outcome buffer does not match N_M x N");
    for (auto b : bits_) {
        require(b <= 1, ErrorCode::InvalidArgument, "outcome bits must be 0 or 1");
    }
}

std::uint64_t Outcomes::shot_index(int index) const {
    require(n_qubits_ <= 63, ErrorCode::TooLarge, "bit string does not fit a 64-bit index");
    std::uint64_t out = 0;
    for (auto b : shot(index)) {
        out = (out << 1) | b;
    }
    return out;
}

MeasurementData::MeasurementData(MeasurementSetting setting, Outcomes outcomes)
    : setting_(std::move(setting)), outcomes_(std::move(outcomes)) {
    require(rmkit::n_qubits(setting_) == outcomes_.n_qubits(), ErrorCode::SizeMismatch,
            "outcome rows must match the setting's qubit count");
}

MeasurementGroup::MeasurementGroup(std::vector<MeasurementData> entries) : entries_(std::move(entries)) {
    require(!entries_.empty(), ErrorCode::InvalidSize, "a measurement group needs at least one setting");
    for (const auto &e : entries_) {
        require(e.n_qubits() == entries_.front().n_qubits(), ErrorCode::SizeMismatch,
                "all entries must share the qubit count");
        require(e.n_shots() == entries_.front().n_shots(), ErrorCode::SizeMismatch,
                "all entries must share the shot count");
    }
}

bool MeasurementGroup::all_local() const {
    for (const auto &e : entries_) {
        if (!is_local(e.setting())) {
            return false;
        }
    }
    return true;
}

char to_char(Pauli p) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    return kLetters[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case 'i': return Pauli::I;
        case 'X':
        case 'x': return Pauli::X;
        case 'Y':
        case 'y': return Pauli::Y;
        case 'Z':
        case 'z': return Pauli::Z;
        default: fail(ErrorCode::InvalidArgument, std::string("not a Pauli letter: ") + c);
    }
}

const Mat2 &pauli_matrix(Pauli p) {
    static const Mat2 kI = Mat2::Identity();
    static const Mat2 kX = (Mat2() << 0, 1, 1, 0).finished();
    static const Mat2 kY = (Mat2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    static const Mat2 kZ = (Mat2() << 1, 0, 0, -1).finished();
    switch (p) {
        case Pauli::I: return kI;
        case Pauli::X: return kX;
        case Pauli::Y: return kY;
        case Pauli::Z: return kZ;
    }
    return kI;
}

PauliObservable::PauliObservable(std::vector<PauliTerm> terms) : terms_(std::move(terms)) {
    require(!terms_.empty(), ErrorCode::InvalidArgument, "observable needs at least one term");
    for (const auto &t : terms_) {
        require(!t.letters.empty(), ErrorCode::InvalidSize, "Pauli strings must be non-empty");
        require(t.letters.size() == terms_.front().letters.size(), ErrorCode::SizeMismatch,
                "all Pauli strings must have the same length");
        require(std::isfinite(t.coefficient), ErrorCode::InvalidArgument, "coefficients must be finite");
    }
}

PauliObservable PauliObservable::parse(std::string_view letters, double coefficient) {
    PauliTerm term;
    term.coefficient = coefficient;
    for (char c : letters) {
        term.letters.push_back(pauli_from_char(c));
    }
    return PauliObservable({std::move(term)});
}

std::string PauliObservable::to_string() const {
    std::string out;
    for (const auto &t : terms_) {
        if (!out.empty()) {
            out += " + ";
        }
        if (t.coefficient != 1.0) {
            out += std::to_string(t.coefficient) + "*";
        }
        for (auto p : t.letters) {
            out += to_char(p);
        }
    }
    return out;
}

MeasurementData reduce_to_subsystem(const MeasurementData &data, const Subsystem &sub) {
    require(is_local(data.setting()), ErrorCode::UnsupportedSetting,
            "only product-form settings can be reduced to a subsystem");
    sub.check_within(data.n_qubits());
    const auto &sites = sub.sites();
    const int n_sub = sub.size();

    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<std::size_t>(data.n_shots()) * static_cast<std::size_t>(n_sub));
    for (int shot = 0; shot < data.n_shots(); ++shot) {
        for (int site : sites) {
            bits.push_back(data.outcomes().bit(shot, site));
        }
    }
    Outcomes outcomes(data.n_shots(), n_sub, std::move(bits));

    if (std::holds_alternative<ComputationalBasisSetting>(data.setting())) {
        return MeasurementData(ComputationalBasisSetting(n_sub), std::move(outcomes));
    }
    const auto &local = std::get<LocalUnitarySetting>(data.setting());
    std::vector<Mat2> unitaries;
    unitaries.reserve(sites.size());
    for (int site : sites) {
        unitaries.push_back(local.unitary(site));
    }
    return MeasurementData(LocalUnitarySetting(std::move(unitaries)), std::move(outcomes));
}

MeasurementGroup reduce_to_subsystem(const MeasurementGroup &group, const Subsystem &sub) {
    std::vector<MeasurementData> entries;
    entries.reserve(group.entries().size());
    for (const auto &e : group.entries()) {
        entries.push_back(reduce_to_subsystem(e, sub));
    }
    return MeasurementGroup(std::move(entries));
}

PauliObservable reduce_to_subsystem(const PauliObservable &obs, const Subsystem &sub) {
    sub.check_within(obs.n_qubits());
    std::vector<bool> kept(static_cast<std::size_t>(obs.n_qubits()), false);
    for (int site : sub.sites()) {
        kept[static_cast<std::size_t>(site - 1)] = true;
    }
    std::vector<PauliTerm> terms;
    for (const auto &t : obs.terms()) {
        for (std::size_t i = 0; i < t.letters.size(); ++i) {
            require(kept[i] || t.letters[i] == Pauli::I, ErrorCode::NotSupportedOnSubsystem,
                    "observable acts outside the subsystem at site " + std::to_string(i + 1));
        }
        PauliTerm reduced{t.coefficient, {}};
        for (int site : sub.sites()) {
            reduced.letters.push_back(t.letters[static_cast<std::size_t>(site - 1)]);
        }
        terms.push_back(std::move(reduced));
    }
    return PauliObservable(std::move(terms));
}

}  // namespace rmkit
