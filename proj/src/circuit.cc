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

#include "qbnet/circuit.h"

#include <charconv>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "qbnet/errors.h"

namespace qbnet {

namespace {

Gate make(GateKind kind, int target, std::vector<Control> controls, std::vector<double> angles = {}) {
    Gate g;
    g.kind = kind;
    g.target = target;
    g.controls = std::move(controls);
    g.angles = std::move(angles);
    return g;
}

const char *mnemonic(GateKind kind) {
    switch (kind) {
        case GateKind::RotY:
            return "ROTY";
        case GateKind::X:
            return "X";
        case GateKind::Y:
            return "Y";
        case GateKind::Z:
            return "Z";
        case GateKind::H:
            return "H";
        case GateKind::MuxRotY:
            return "MUXROTY";
        case GateKind::Reset:
            return "RESET";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            words.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return words;
}

class LineError {
   public:
    explicit LineError(std::size_t line) : line_(line) {}
    [[noreturn]] void operator()(const std::string &what) const {
        throw ParseError("circuit line " + std::to_string(line_) + ": " + what);
    }

   private:
    std::size_t line_;
};

int parse_int(std::string_view s, const LineError &fail) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail("bad integer '" + std::string(s) + "'");
    }
    return v;
}

double parse_double(std::string_view s, const LineError &fail) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail("bad angle '" + std::string(s) + "'");
    }
    return v;
}

int parse_target(std::string_view w, const LineError &fail) {
    if (w.size() < 2 || w[0] != 't') {
        fail("expected target 't<q>', got '" + std::string(w) + "'");
    }
    return parse_int(w.substr(1), fail);
}

Control parse_control(std::string_view w, bool polarity_required, const LineError &fail) {
    if (w.size() < 2 || w[0] != 'c') {
        fail("expected control 'c<q>', got '" + std::string(w) + "'");
    }
    const auto colon = w.find(':');
    Control c;
    if (colon == std::string_view::npos) {
        if (polarity_required) {
            fail("control '" + std::string(w) + "' lacks a polarity");
        }
        c.qubit = parse_int(w.substr(1), fail);
        return c;
    }
    if (!polarity_required) {
        fail("multiplexor control '" + std::string(w) + "' takes no polarity");
    }
    c.qubit = parse_int(w.substr(1, colon - 1), fail);
    const std::string_view pol = w.substr(colon + 1);
    if (pol == "+") {
        c.positive = true;
    } else if (pol == "-") {
        c.positive = false;
    } else {
        fail("polarity must be '+' or '-', got '" + std::string(pol) + "'");
    }
    return c;
}

}  // namespace

Gate Gate::roty(int target, double angle, std::vector<Control> controls) {
    return make(GateKind::RotY, target, std::move(controls), {angle});
}
Gate Gate::pauli_x(int target, std::vector<Control> controls) { return make(GateKind::X, target, std::move(controls)); }
Gate Gate::pauli_y(int target, std::vector<Control> controls) { return make(GateKind::Y, target, std::move(controls)); }
Gate Gate::pauli_z(int target, std::vector<Control> controls) { return make(GateKind::Z, target, std::move(controls)); }
Gate Gate::hadamard(int target, std::vector<Control> controls) { return make(GateKind::H, target, std::move(controls)); }
Gate Gate::reset(int target) { return make(GateKind::Reset, target, {}); }

Gate Gate::mux_roty(int target, const std::vector<int> &controls, std::vector<double> angles) {
    std::vector<Control> cs;
    for (int q : controls) {
        cs.push_back({q, true});
    }
    return make(GateKind::MuxRotY, target, std::move(cs), std::move(angles));
}

void Gate::validate(int n_qubits) const {
    if (target < 0 || target >= n_qubits) {
        throw IndexError(std::string(mnemonic(kind)) + " target " + std::to_string(target) + " outside " +
                         std::to_string(n_qubits) + " qubits");
    }
    std::set<int> seen{target};
    for (const Control &c : controls) {
        if (c.qubit < 0 || c.qubit >= n_qubits) {
            throw IndexError("control qubit " + std::to_string(c.qubit) + " outside " + std::to_string(n_qubits) +
                             " qubits");
        }
        if (!seen.insert(c.qubit).second) {
            throw IndexError("qubit " + std::to_string(c.qubit) + " repeated in one gate");
        }
    }
    switch (kind) {
        case GateKind::RotY:
            if (angles.size() != 1) {
                throw IndexError("ROTY takes exactly one angle");
            }
            break;
        case GateKind::MuxRotY:
            if (controls.size() >= 63 || angles.size() != (std::size_t{1} << controls.size())) {
                throw IndexError("MUXROTY with " + std::to_string(controls.size()) + " controls needs " +
                                 std::to_string(std::size_t{1} << controls.size()) + " angles");
            }
            for (const Control &c : controls) {
                if (!c.positive) {
                    throw IndexError("MUXROTY controls carry no polarity");
                }
            }
            break;
        case GateKind::Reset:
            if (!controls.empty() || !angles.empty()) {
                throw IndexError("RESET takes no controls");
            }
            break;
        default:
            if (!angles.empty()) {
                throw IndexError(std::string(mnemonic(kind)) + " takes no angle");
            }
    }
}

void Circuit::add(Gate gate) {
    gate.validate(n_qubits_);
    gates_.push_back(std::move(gate));
}

void Circuit::append(const Circuit &other, const std::vector<int> &qubit_map) {
    for (Gate g : other.gates()) {
        g.target = qubit_map.at(g.target);
        for (Control &c : g.controls) {
            c.qubit = qubit_map.at(c.qubit);
        }
        add(std::move(g));
    }
}

std::size_t Circuit::count(GateKind kind) const {
    std::size_t n = 0;
    for (const Gate &g : gates_) {
        n += g.kind == kind;
    }
    return n;
}

std::size_t Circuit::cnot_count() const {
    std::size_t n = 0;
    for (const Gate &g : gates_) {
        n += g.is_cnot();
    }
    return n;
}

std::string serialize(const Circuit &circuit) {
    std::ostringstream out;
    out << "QUBITS " << circuit.n_qubits() << '\n';
    for (const Gate &g : circuit.gates()) {
        out << mnemonic(g.kind);
        if (g.kind == GateKind::RotY) {
            out << ' ' << format_double(g.angles[0]);
        }
        out << " t" << g.target;
        for (const Control &c : g.controls) {
            out << " c" << c.qubit;
            if (g.kind != GateKind::MuxRotY) {
                out << ':' << (c.positive ? '+' : '-');
            }
        }
        if (g.kind == GateKind::MuxRotY) {
            out << " |";
            for (double a : g.angles) {
                out << ' ' << format_double(a);
            }
        }
        out << '\n';
    }
    return out.str();
}

Circuit parse_circuit(std::string_view text) {
    std::optional<Circuit> circuit;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const LineError fail(line_no);
        const auto words = split_words(line);
        if (words.empty() || words[0][0] == '#') {
            continue;
        }
        if (!circuit) {
            if (words[0] != "QUBITS" || words.size() != 2) {
                fail("expected header 'QUBITS <n>'");
            }
            const int n = parse_int(words[1], fail);
            if (n < 0) {
                fail("negative qubit count");
            }
            circuit.emplace(n);
            continue;
        }
        const std::string_view op = words[0];
        Gate g;
        std::size_t k = 1;
        if (op == "ROTY") {
            g.kind = GateKind::RotY;
            if (words.size() < 3) {
                fail("ROTY needs an angle and a target");
            }
            g.angles.push_back(parse_double(words[k++], fail));
        } else if (op == "X") {
            g.kind = GateKind::X;
        } else if (op == "Y") {
            g.kind = GateKind::Y;
        } else if (op == "Z") {
            g.kind = GateKind::Z;
        } else if (op == "H") {
            g.kind = GateKind::H;
        } else if (op == "MUXROTY") {
            g.kind = GateKind::MuxRotY;
        } else if (op == "RESET") {
            g.kind = GateKind::Reset;
        } else {
            fail("unknown gate '" + std::string(op) + "'");
        }
        if (k >= words.size()) {
            fail("missing target");
        }
        g.target = parse_target(words[k++], fail);
        const bool mux = g.kind == GateKind::MuxRotY;
        for (; k < words.size() && words[k] != "|"; ++k) {
            g.controls.push_back(parse_control(words[k], !mux, fail));
        }
        if (mux) {
            if (k >= words.size()) {
                fail("MUXROTY needs '|' before its angles");
            }
            for (++k; k < words.size(); ++k) {
                g.angles.push_back(parse_double(words[k], fail));
            }
        } else if (k < words.size()) {
            fail("unexpected '|'");
        }
        try {
            circuit->add(std::move(g));
        } catch (const IndexError &e) {
            fail(e.what());
        }
    }
    if (!circuit) {
        throw ParseError("circuit text lacks a 'QUBITS <n>' header");
    }
    return *circuit;
}

}  // namespace qbnet
