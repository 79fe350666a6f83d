// Copyright 2026 The qbnet Authors
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

#ifndef QBNET_CIRCUIT_H
#define QBNET_CIRCUIT_H

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qbnet {

/// Gate kinds. RotY(θ) = [[cos θ, -sin θ], [sin θ, cos θ]] so that
/// RotY(θ)|0> = cos θ |0> + sin θ |1>. Reset returns one qubit to |0> and is
/// the only non-unitary operation.
enum class GateKind { RotY, X, Y, Z, H, MuxRotY, Reset };

/// A control on `qubit`. Positive polarity fires on |1>, negative on |0>.
struct Control {
    int qubit = 0;
    bool positive = true;

    bool operator==(const Control &) const = default;
};

struct Gate {
    GateKind kind = GateKind::X;
    int target = 0;
    /// For MuxRotY these select the angle index (first listed = least
    /// significant bit) and are all positive.
    std::vector<Control> controls;
    /// One angle for RotY, 2^|controls| angles for MuxRotY, empty otherwise.
    std::vector<double> angles;

    bool operator==(const Gate &) const = default;

    static Gate roty(int target, double angle, std::vector<Control> controls = {});
    static Gate pauli_x(int target, std::vector<Control> controls = {});
    static Gate pauli_y(int target, std::vector<Control> controls = {});
    static Gate pauli_z(int target, std::vector<Control> controls = {});
    static Gate hadamard(int target, std::vector<Control> controls = {});
    static Gate cnot(int target, int control) { return pauli_x(target, {{control, true}}); }
    static Gate mux_roty(int target, const std::vector<int> &controls, std::vector<double> angles);
    static Gate reset(int target);

    /// Throws IndexError for out-of-range or repeated qubits, and for angle
    /// counts that do not match the kind.
    void validate(int n_qubits) const;

    bool is_cnot() const { return kind == GateKind::X && controls.size() == 1; }
};

/// Ordered gate list over a fixed register. List order is application order;
/// qubit 0 is the least significant bit of a basis index.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    /// Validates and appends.
    void add(Gate gate);
    /// Appends every gate of `other` with qubit q renamed to qubit_map[q].
    void append(const Circuit &other, const std::vector<int> &qubit_map);

    std::size_t count(GateKind kind) const;
    std::size_t cnot_count() const;

    bool operator==(const Circuit &) const = default;

   private:
    int n_qubits_ = 0;
    std::vector<Gate> gates_;
};

/// Text form: a `QUBITS <n>` header followed by one gate per line, read top
/// to bottom in application order. Angles use the shortest representation
/// that reads back to the same double.
std::string serialize(const Circuit &circuit);

/// Inverse of serialize. Blank lines and lines starting with '#' are ignored.
/// Throws ParseError naming the offending line.
Circuit parse_circuit(std::string_view text);

}  // namespace qbnet

#endif
