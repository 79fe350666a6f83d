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

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "qbnet/errors.h"
#include "qbnet/state_vector.h"

namespace qbnet {

namespace {

constexpr double kDropBelow = 1e-30;
constexpr double kNegligibleProbability = 1e-28;

bool fires(const Gate &g, std::uint64_t i) {
    for (const Control &c : g.controls) {
        if ((((i >> c.qubit) & 1U) != 0) != c.positive) {
            return false;
        }
    }
    return true;
}

std::uint64_t outcome_of(std::span<const int> qubits, std::uint64_t i) {
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        k |= ((i >> qubits[j]) & 1U) << j;
    }
    return k;
}

void check_subset(std::span<const int> qubits, int n) {
    for (std::size_t a = 0; a < qubits.size(); ++a) {
        if (qubits[a] < 0 || qubits[a] >= n) {
            throw IndexError("qubit " + std::to_string(qubits[a]) + " outside " + std::to_string(n) + " qubits");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (qubits[a] == qubits[b]) {
                throw IndexError("qubit " + std::to_string(qubits[a]) + " listed twice");
            }
        }
    }
    if (qubits.size() > 30) {
        throw WidthError("cannot tabulate a marginal over more than 30 qubits");
    }
}

}  // namespace

SparseState::SparseState(int n_qubits, std::uint64_t basis) : n_qubits_(n_qubits) {
    check_width(n_qubits);
    if (n_qubits < 64 && basis >> n_qubits != 0) {
        throw IndexError("basis index outside the register");
    }
    terms_.emplace_back(basis, 1.0);
}

Amplitude SparseState::amplitude(std::uint64_t basis) const {
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), basis,
                                     [](const auto &t, std::uint64_t b) { return t.first < b; });
    return it != terms_.end() && it->first == basis ? it->second : Amplitude(0);
}

double SparseState::norm() const {
    double sum = 0;
    for (const auto &t : terms_) {
        sum += std::norm(t.second);
    }
    return std::sqrt(sum);
}

template <class Map>
void SparseState::transform(const Gate &g, Map map) {
    std::unordered_map<std::uint64_t, Amplitude> next;
    next.reserve(terms_.size() * 2);
    const std::uint64_t bit = std::uint64_t{1} << g.target;
    for (const auto &[i, a] : terms_) {
        if (g.kind != GateKind::MuxRotY && !fires(g, i)) {
            next[i] += a;
            continue;
        }
        Amplitude m[4];
        map(i, m);
        const std::uint64_t i0 = i & ~bit;
        const std::uint64_t i1 = i | bit;
        if ((i & bit) == 0) {
            next[i0] += m[0] * a;
            next[i1] += m[2] * a;
        } else {
            next[i0] += m[1] * a;
            next[i1] += m[3] * a;
        }
    }
    terms_.clear();
    for (const auto &[i, a] : next) {
        if (std::norm(a) > kDropBelow) {
            terms_.emplace_back(i, a);
        }
    }
    std::sort(terms_.begin(), terms_.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
}

void SparseState::apply(const Gate &g, Rng *rng) {
    g.validate(n_qubits_);
    const std::uint64_t bit = std::uint64_t{1} << g.target;
    switch (g.kind) {
        case GateKind::X:
            for (auto &t : terms_) {
                if (fires(g, t.first)) {
                    t.first ^= bit;
                }
            }
            std::sort(terms_.begin(), terms_.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
            return;
        case GateKind::Z:
            for (auto &t : terms_) {
                if (fires(g, t.first) && (t.first & bit)) {
                    t.second = -t.second;
                }
            }
            return;
        case GateKind::Y: {
            const Amplitude i1(0, 1);
            for (auto &t : terms_) {
                if (fires(g, t.first)) {
                    t.second *= (t.first & bit) ? -i1 : i1;
                    t.first ^= bit;
                }
            }
            std::sort(terms_.begin(), terms_.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
            return;
        }
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            transform(g, [r](std::uint64_t, Amplitude *m) { m[0] = r, m[1] = r, m[2] = r, m[3] = -r; });
            return;
        }
        case GateKind::RotY: {
            const double c = std::cos(g.angles[0]);
            const double s = std::sin(g.angles[0]);
            transform(g, [c, s](std::uint64_t, Amplitude *m) { m[0] = c, m[1] = -s, m[2] = s, m[3] = c; });
            return;
        }
        case GateKind::MuxRotY:
            transform(g, [&g](std::uint64_t i, Amplitude *m) {
                std::uint64_t k = 0;
                for (std::size_t j = 0; j < g.controls.size(); ++j) {
                    k |= ((i >> g.controls[j].qubit) & 1U) << j;
                }
                const double c = std::cos(g.angles[k]);
                const double s = std::sin(g.angles[k]);
                m[0] = c, m[1] = -s, m[2] = s, m[3] = c;
            });
            return;
        case GateKind::Reset: {
            const double p1 = probability_one(g.target);
            const double p0 = 1.0 - p1;
            int outcome = 0;
            if (p1 <= kNegligibleProbability) {
                outcome = 0;
            } else if (p0 <= kNegligibleProbability) {
                outcome = 1;
            } else {
                if (rng == nullptr) {
                    throw NumericError("reset of an entangled qubit needs a random source");
                }
                outcome = rng->uniform() < p0 ? 0 : 1;
            }
            project(g.target, outcome);
            if (outcome == 1) {
                apply(Gate::pauli_x(g.target));
            }
            return;
        }
    }
}

void SparseState::apply(const Circuit &circuit, Rng *rng) {
    if (circuit.n_qubits() != n_qubits_) {
        throw IndexError("circuit has " + std::to_string(circuit.n_qubits()) + " qubits, state has " +
                         std::to_string(n_qubits_));
    }
    for (const Gate &g : circuit.gates()) {
        apply(g, rng);
    }
}

double SparseState::probability_one(int q) const {
    const std::uint64_t bit = std::uint64_t{1} << q;
    double p1 = 0;
    double total = 0;
    for (const auto &[i, a] : terms_) {
        total += std::norm(a);
        if (i & bit) {
            p1 += std::norm(a);
        }
    }
    return total > 0 ? p1 / total : 0.0;
}

void SparseState::project(int q, int value) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    std::erase_if(terms_, [&](const auto &t) { return ((t.first & bit) != 0) != (value == 1); });
    const double n = norm();
    if (!(n > 0)) {
        throw NumericError("projection onto a zero-probability outcome");
    }
    for (auto &t : terms_) {
        t.second /= n;
    }
}

std::vector<double> SparseState::marginal(std::span<const int> qubits) const {
    check_subset(qubits, n_qubits_);
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    for (const auto &[i, a] : terms_) {
        p[outcome_of(qubits, i)] += std::norm(a);
    }
    return p;
}

std::uint64_t SparseState::measure(std::span<const int> qubits, Rng &rng) {
    const std::vector<double> p = marginal(qubits);
    const std::uint64_t outcome = rng.categorical(p);
    std::erase_if(terms_, [&](const auto &t) { return outcome_of(qubits, t.first) != outcome; });
    const double scale = 1.0 / std::sqrt(p[outcome]);
    for (auto &t : terms_) {
        t.second *= scale;
    }
    return outcome;
}

SparseMixture::SparseMixture(int n_qubits, std::uint64_t basis) {
    branches_.emplace_back(1.0, SparseState(n_qubits, basis));
}

void SparseMixture::apply(const Gate &gate) {
    if (gate.kind != GateKind::Reset) {
        for (auto &b : branches_) {
            b.second.apply(gate);
        }
        return;
    }
    std::vector<std::pair<double, SparseState>> next;
    next.reserve(branches_.size() * 2);
    for (auto &[w, state] : branches_) {
        const double p1 = state.probability_one(gate.target);
        const double p0 = 1.0 - p1;
        if (p1 <= kNegligibleProbability || p0 <= kNegligibleProbability) {
            state.apply(gate);
            next.emplace_back(w, std::move(state));
            continue;
        }
        SparseState one = state;
        state.project(gate.target, 0);
        one.project(gate.target, 1);
        one.apply(Gate::pauli_x(gate.target));
        next.emplace_back(w * p0, std::move(state));
        next.emplace_back(w * p1, std::move(one));
    }
    branches_ = std::move(next);
}

void SparseMixture::apply(const Circuit &circuit) {
    for (const Gate &g : circuit.gates()) {
        apply(g);
    }
}

std::vector<double> SparseMixture::marginal(std::span<const int> qubits) const {
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    for (const auto &[w, state] : branches_) {
        const std::vector<double> part = state.marginal(qubits);
        for (std::size_t k = 0; k < p.size(); ++k) {
            p[k] += w * part[k];
        }
    }
    return p;
}

}  // namespace qbnet
