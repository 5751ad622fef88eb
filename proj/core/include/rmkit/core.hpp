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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rmkit/linalg.hpp"

namespace rmkit {

/// Ordered, duplicate-free list of 1-based site indices.
class Subsystem {
  public:
    explicit Subsystem(std::vector<int> sites);

    /// Sites first..last inclusive.
    static Subsystem range(int first, int last);

    const std::vector<int> &sites() const noexcept { return sites_; }
    int size() const noexcept { return static_cast<int>(sites_.size()); }

    /// Throws InvalidSubsystem unless every site lies in [1, n_qubits].
    void check_within(int n_qubits) const;

    friend bool operator==(const Subsystem &, const Subsystem &) = default;

  private:
    std::vector<int> sites_;
};

/// One Haar (or basis-change) rotation per qubit, applied before a
/// computational-basis measurement.
class LocalUnitarySetting {
  public:
    explicit LocalUnitarySetting(std::vector<Mat2> unitaries);

    int n_qubits() const noexcept { return static_cast<int>(unitaries_.size()); }
    const std::vector<Mat2> &unitaries() const noexcept { return unitaries_; }
    /// 1-based site.
    const Mat2 &unitary(int site) const { return unitaries_.at(static_cast<std::size_t>(site - 1)); }

    friend bool operator==(const LocalUnitarySetting &a, const LocalUnitarySetting &b);

  private:
    std::vector<Mat2> unitaries_;
};

class ComputationalBasisSetting {
  public:
    explicit ComputationalBasisSetting(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }

    friend bool operator==(const ComputationalBasisSetting &, const ComputationalBasisSetting &) = default;

  private:
    int n_qubits_;
};

/// A one- or two-qubit gate. For two-qubit gates sites[0] labels the most
/// significant bit of the 4x4 matrix index.
struct Gate {
    std::vector<int> sites;
    MatrixXc unitary;

    friend bool operator==(const Gate &a, const Gate &b);
};

class ShallowCircuitSetting {
  public:
    ShallowCircuitSetting(int n_qubits, int depth, std::vector<Gate> gates);

    int n_qubits() const noexcept { return n_qubits_; }
    int depth() const noexcept { return depth_; }
    /// In application order.
    const std::vector<Gate> &gates() const noexcept { return gates_; }

    friend bool operator==(const ShallowCircuitSetting &a, const ShallowCircuitSetting &b);

  private:
    int n_qubits_;
    int depth_;
    std::vector<Gate> gates_;
};

using MeasurementSetting = std::variant<LocalUnitarySetting, ComputationalBasisSetting, ShallowCircuitSetting>;

int n_qubits(const MeasurementSetting &setting);

/// True for product-form settings (local unitaries or the computational basis).
bool is_local(const MeasurementSetting &setting);

/// Per-site unitaries of a product-form setting; identities for the
/// computational basis. Throws UnsupportedSetting for shallow circuits.
std::vector<Mat2> local_unitaries(const MeasurementSetting &setting);

/// Full 2^N x 2^N unitary of a setting, site 1 most significant. N <= 12.
MatrixXc dense_unitary(const MeasurementSetting &setting);

/// N_M x N matrix of measured bits, row-major.
class Outcomes {
  public:
    Outcomes(int n_shots, int n_qubits, std::vector<std::uint8_t> bits);

    int n_shots() const noexcept { return n_shots_; }
    int n_qubits() const noexcept { return n_qubits_; }

    std::span<const std::uint8_t> shot(int index) const {
        return {bits_.data() + static_cast<std::size_t>(index) * static_cast<std::size_t>(n_qubits_),
                static_cast<std::size_t>(n_qubits_)};
    }
    /// 0-based shot, 1-based site.
    std::uint8_t bit(int shot_index, int site) const {
        return bits_[static_cast<std::size_t>(shot_index) * static_cast<std::size_t>(n_qubits_) +
                     static_cast<std::size_t>(site - 1)];
    }
    /// Shot as a basis index, site 1 most significant. Requires N <= 63.
    std::uint64_t shot_index(int index) const;

    const std::vector<std::uint8_t> &bits() const noexcept { return bits_; }

    friend bool operator==(const Outcomes &, const Outcomes &) = default;

  private:
    int n_shots_;
    int n_qubits_;
    std::vector<std::uint8_t> bits_;
};

/// Bit strings recorded in a single setting.
class MeasurementData {
  public:
    MeasurementData(MeasurementSetting setting, Outcomes outcomes);

    const MeasurementSetting &setting() const noexcept { return setting_; }
    const Outcomes &outcomes() const noexcept { return outcomes_; }
    int n_qubits() const noexcept { return outcomes_.n_qubits(); }
    int n_shots() const noexcept { return outcomes_.n_shots(); }

    friend bool operator==(const MeasurementData &, const MeasurementData &) = default;

  private:
    MeasurementSetting setting_;
    Outcomes outcomes_;
};

/// N_U measurement data entries sharing qubit count and shot count.
class MeasurementGroup {
  public:
    explicit MeasurementGroup(std::vector<MeasurementData> entries);

    const std::vector<MeasurementData> &entries() const noexcept { return entries_; }
    const MeasurementData &operator[](std::size_t i) const { return entries_[i]; }
    int n_qubits() const noexcept { return entries_.front().n_qubits(); }
    int n_settings() const noexcept { return static_cast<int>(entries_.size()); }
    int n_shots() const noexcept { return entries_.front().n_shots(); }
    bool all_local() const;

    friend bool operator==(const MeasurementGroup &, const MeasurementGroup &) = default;

  private:
    std::vector<MeasurementData> entries_;
};

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);
const Mat2 &pauli_matrix(Pauli p);

struct PauliTerm {
    double coefficient = 1.0;
    std::vector<Pauli> letters;

    friend bool operator==(const PauliTerm &, const PauliTerm &) = default;
};

/// Weighted sum of Pauli strings over N qubits.
class PauliObservable {
  public:
    explicit PauliObservable(std::vector<PauliTerm> terms);

    /// Single string such as "ZIIX" (letter i acts on site i).
    static PauliObservable parse(std::string_view letters, double coefficient = 1.0);

    int n_qubits() const noexcept { return static_cast<int>(terms_.front().letters.size()); }
    const std::vector<PauliTerm> &terms() const noexcept { return terms_; }

    std::string to_string() const;

    friend bool operator==(const PauliObservable &, const PauliObservable &) = default;

  private:
    std::vector<PauliTerm> terms_;
};

/// Keeps outcome columns and unitaries of the listed sites. Shallow settings
/// are rejected.
MeasurementData reduce_to_subsystem(const MeasurementData &data, const Subsystem &sub);
MeasurementGroup reduce_to_subsystem(const MeasurementGroup &group, const Subsystem &sub);

/// Reindexes letters onto the subsystem; every term must act as identity
/// outside it.
PauliObservable reduce_to_subsystem(const PauliObservable &obs, const Subsystem &sub);

}  // namespace rmkit
