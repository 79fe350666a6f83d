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

#include "qbnet/state_vector.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <unordered_map>

#include "qbnet/errors.h"

namespace qbnet {

namespace {

constexpr double kNegligibleProbability = 1e-28;

using Matrix2 = Amplitude[4];

void gate_matrix(const Gate &g, Matrix2 &m) {
    const double r = 1.0 / std::sqrt(2.0);
    const Amplitude i1(0, 1);
    switch (g.kind) {
        case GateKind::RotY: {
            const double c = std::cos(g.angles[0]);
            const double s = std::sin(g.angles[0]);
            m[0] = c, m[1] = -s, m[2] = s, m[3] = c;
            return;
        }
        case GateKind::X:
            m[0] = 0, m[1] = 1, m[2] = 1, m[3] = 0;
            return;
        case GateKind::Y:
            m[0] = 0, m[1] = -i1, m[2] = i1, m[3] = 0;
            return;
        case GateKind::Z:
            m[0] = 1, m[1] = 0, m[2] = 0, m[3] = -1;
            return;
        case GateKind::H:
            m[0] = r, m[1] = r, m[2] = r, m[3] = -r;
            return;
        default:
            throw IndexError("gate has no fixed 2x2 matrix");
    }
}

struct ControlMask {
    std::uint64_t ones = 0;
    std::uint64_t zeros = 0;

    explicit ControlMask(const Gate &g) {
        for (const Control &c : g.controls) {
            (c.positive ? ones : zeros) |= std::uint64_t{1} << c.qubit;
        }
    }
    bool fires(std::uint64_t i) const { return (i & ones) == ones && (i & zeros) == 0; }
};

std::uint64_t mux_index(const Gate &g, std::uint64_t i) {
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < g.controls.size(); ++j) {
        k |= ((i >> g.controls[j].qubit) & 1U) << j;
    }
    return k;
}

std::uint64_t outcome_of(std::span<const int> qubits, std::uint64_t i) {
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        k |= ((i >> qubits[j]) & 1U) << j;
    }
    return k;
}

void check_qubits(std::span<const int> qubits, int n) {
    std::uint64_t seen = 0;
    for (int q : qubits) {
        if (q < 0 || q >= n) {
            throw IndexError("qubit " + std::to_string(q) + " outside " + std::to_string(n) + " qubits");
        }
        if (seen & (std::uint64_t{1} << q)) {
            throw IndexError("qubit " + std::to_string(q) + " listed twice");
        }
        seen |= std::uint64_t{1} << q;
    }
    if (qubits.size() > 30) {
        throw WidthError("cannot tabulate a marginal over more than 30 qubits");
    }
}

}  // namespace

int max_qubits() {
    const char *env = std::getenv("QBN_MAX_QUBITS");
    if (env != nullptr) {
        int v = 0;
        const char *end = env + std::strlen(env);
        const auto res = std::from_chars(env, end, v);
        if (res.ec == std::errc() && res.ptr == end && v > 0) {
            return std::min(v, 62);
        }
    }
    return kDefaultMaxQubits;
}

void check_width(int n_qubits) {
    if (n_qubits < 0) {
        throw IndexError("negative qubit count");
    }
    const int cap = max_qubits();
    if (n_qubits > cap) {
        throw WidthError("circuit needs " + std::to_string(n_qubits) + " qubits, above the simulator cap of " +
                         std::to_string(cap) + " (QBN_MAX_QUBITS)");
    }
}

StateVector::StateVector(int n_qubits, std::uint64_t basis) : n_qubits_(n_qubits) {
    check_width(n_qubits);
    amp_.assign(std::size_t{1} << n_qubits, 0.0);
    amp_.at(basis) = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    int n = 0;
    while ((std::size_t{1} << n) < amplitudes.size()) {
        ++n;
    }
    if ((std::size_t{1} << n) != amplitudes.size()) {
        throw IndexError("amplitude count must be a power of two");
    }
    StateVector s(n);
    s.amp_ = std::move(amplitudes);
    return s;
}

double StateVector::norm() const {
    double sum = 0;
    for (const Amplitude &a : amp_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

void StateVector::apply_single(const Gate &g, const Matrix2 m) {
    const ControlMask mask(g);
    const std::uint64_t bit = std::uint64_t{1} << g.target;
    const std::uint64_t n = amp_.size();
    for (std::uint64_t i = 0; i < n; ++i) {
        if ((i & bit) != 0 || !mask.fires(i)) {
            continue;
        }
        const Amplitude a0 = amp_[i];
        const Amplitude a1 = amp_[i | bit];
        amp_[i] = m[0] * a0 + m[1] * a1;
        amp_[i | bit] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_mux(const Gate &g) {
    const std::uint64_t bit = std::uint64_t{1} << g.target;
    const std::uint64_t n = amp_.size();
    std::vector<double> cs(g.angles.size());
    std::vector<double> ss(g.angles.size());
    for (std::size_t k = 0; k < g.angles.size(); ++k) {
        cs[k] = std::cos(g.angles[k]);
        ss[k] = std::sin(g.angles[k]);
    }
    for (std::uint64_t i = 0; i < n; ++i) {
        if ((i & bit) != 0) {
            continue;
        }
        const std::uint64_t k = mux_index(g, i);
        const Amplitude a0 = amp_[i];
        const Amplitude a1 = amp_[i | bit];
        amp_[i] = cs[k] * a0 - ss[k] * a1;
        amp_[i | bit] = ss[k] * a0 + cs[k] * a1;
    }
}

void StateVector::apply_reset(int q, Rng *rng) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    double p1 = 0;
    double p0 = 0;
    for (std::uint64_t i = 0; i < amp_.size(); ++i) {
        ((i & bit) ? p1 : p0) += std::norm(amp_[i]);
    }
    int outcome = 0;
    if (p1 <= kNegligibleProbability) {
        outcome = 0;
    } else if (p0 <= kNegligibleProbability) {
        outcome = 1;
    } else {
        if (rng == nullptr) {
            throw NumericError("reset of an entangled qubit needs a random source");
        }
        outcome = rng->uniform() * (p0 + p1) < p0 ? 0 : 1;
    }
    const double scale = 1.0 / std::sqrt(outcome ? p1 : p0);
    for (std::uint64_t i = 0; i < amp_.size(); ++i) {
        if (((i & bit) != 0) != (outcome == 1)) {
            amp_[i] = 0;
        } else {
            amp_[i] *= scale;
        }
    }
    if (outcome == 1) {
        for (std::uint64_t i = 0; i < amp_.size(); ++i) {
            if (i & bit) {
                std::swap(amp_[i], amp_[i ^ bit]);
            }
        }
    }
}

void StateVector::apply(const Gate &gate, Rng *rng) {
    gate.validate(n_qubits_);
    switch (gate.kind) {
        case GateKind::MuxRotY:
            apply_mux(gate);
            return;
        case GateKind::Reset:
            apply_reset(gate.target, rng);
            return;
        default: {
            Matrix2 m;
            gate_matrix(gate, m);
            apply_single(gate, m);
        }
    }
}

void StateVector::apply(const Circuit &circuit, Rng *rng) {
    if (circuit.n_qubits() != n_qubits_) {
        throw IndexError("circuit has " + std::to_string(circuit.n_qubits()) + " qubits, state has " +
                         std::to_string(n_qubits_));
    }
    for (const Gate &g : circuit.gates()) {
        apply(g, rng);
    }
}

std::vector<double> StateVector::marginal(std::span<const int> qubits) const {
    check_qubits(qubits, n_qubits_);
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    for (std::uint64_t i = 0; i < amp_.size(); ++i) {
        p[outcome_of(qubits, i)] += std::norm(amp_[i]);
    }
    return p;
}

std::uint64_t StateVector::measure(std::span<const int> qubits, Rng &rng) {
    const std::vector<double> p = marginal(qubits);
    const std::uint64_t outcome = rng.categorical(p);
    const double scale = 1.0 / std::sqrt(p[outcome]);
    for (std::uint64_t i = 0; i < amp_.size(); ++i) {
        if (outcome_of(qubits, i) == outcome) {
            amp_[i] *= scale;
        } else {
            amp_[i] = 0;
        }
    }
    return outcome;
}

StateVector apply_gate(StateVector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

StateVector apply_multiplexed_roty(StateVector state, const Gate &gate) {
    if (gate.kind != GateKind::MuxRotY) {
        throw IndexError("apply_multiplexed_roty needs a MUXROTY gate");
    }
    state.apply(gate);
    return state;
}

std::pair<std::uint64_t, StateVector> measure_subset(StateVector state, std::span<const int> qubits, Rng &rng) {
    const std::uint64_t outcome = state.measure(qubits, rng);
    return {outcome, std::move(state)};
}

std::vector<double> marginal_distribution(const StateVector &state, std::span<const int> qubits) {
    return state.marginal(qubits);
}

Eigen::MatrixXcd circuit_unitary(const Circuit &circuit) {
    const int n = circuit.n_qubits();
    if (n > 12) {
        throw WidthError("dense unitary limited to 12 qubits");
    }
    if (circuit.count(GateKind::Reset) != 0) {
        throw NumericError("a circuit with resets has no unitary");
    }
    const auto dim = static_cast<Eigen::Index>(1) << n;
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        StateVector s(n, static_cast<std::uint64_t>(b));
        s.apply(circuit);
        for (Eigen::Index r = 0; r < dim; ++r) {
            u(r, b) = s.amplitudes()[static_cast<std::size_t>(r)];
        }
    }
    return u;
}

}  // namespace qbnet
