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

#include <gtest/gtest.h>

#include <cstdlib>

#include "qbnet/errors.h"
#include "qbnet/muxor.h"
#include "qbnet/posterior.h"
#include "qbnet/state_vector.h"
#include "test_util.h"

namespace qbnet {
namespace {

using testing::Cmat;
using testing::max_abs;

Gate random_gate(std::mt19937_64 &gen, int n) {
    std::vector<int> qubits(n);
    std::iota(qubits.begin(), qubits.end(), 0);
    std::shuffle(qubits.begin(), qubits.end(), gen);
    const int n_controls = static_cast<int>(gen() % 3);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    const int kind = static_cast<int>(gen() % 6);
    if (kind == 5) {
        const std::vector<int> controls(qubits.begin() + 1, qubits.begin() + 1 + n_controls);
        return Gate::mux_roty(qubits[0], controls, testing::random_angles(gen, std::size_t{1} << n_controls));
    }
    std::vector<Control> controls;
    for (int k = 0; k < n_controls; ++k) {
        controls.push_back({qubits[1 + k], gen() % 2 == 0});
    }
    switch (kind) {
        case 0:
            return Gate::roty(qubits[0], angle(gen), controls);
        case 1:
            return Gate::pauli_x(qubits[0], controls);
        case 2:
            return Gate::pauli_y(qubits[0], controls);
        case 3:
            return Gate::pauli_z(qubits[0], controls);
        default:
            return Gate::hadamard(qubits[0], controls);
    }
}

Circuit random_circuit(std::mt19937_64 &gen, int n, int gates) {
    Circuit c(n);
    for (int g = 0; g < gates; ++g) {
        c.add(random_gate(gen, n));
    }
    return c;
}

StateVector random_state(std::mt19937_64 &gen, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Amplitude> amp(std::size_t{1} << n);
    double norm = 0;
    for (auto &a : amp) {
        a = {normal(gen), normal(gen)};
        norm += std::norm(a);
    }
    for (auto &a : amp) {
        a /= std::sqrt(norm);
    }
    return StateVector::from_amplitudes(amp);
}

Eigen::VectorXcd as_vector(const StateVector &s) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.amplitudes().size()));
    for (std::size_t i = 0; i < s.amplitudes().size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s.amplitudes()[i];
    }
    return v;
}

TEST(ApplyGate, HadamardOnZero) {
    const StateVector s = apply_gate(StateVector(1), Gate::hadamard(0));
    EXPECT_NEAR(s.amplitude(0).real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.amplitude(1).real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(ApplyGate, CnotFlipsTargetWhenControlSet) {
    const StateVector s = apply_gate(StateVector(2, 0b01), Gate::cnot(1, 0));
    EXPECT_EQ(s.amplitude(0b11), Amplitude(1.0));
    const StateVector t = apply_gate(StateVector(2, 0b10), Gate::cnot(1, 0));
    EXPECT_EQ(t.amplitude(0b10), Amplitude(1.0));
    const StateVector u = apply_gate(StateVector(2, 0b00), Gate::pauli_x(1, {{0, false}}));
    EXPECT_EQ(u.amplitude(0b10), Amplitude(1.0));
}

TEST(ApplyGate, RotationSignConvention) {
    const double theta = 0.3;
    const StateVector s = apply_gate(StateVector(1), Gate::roty(0, theta));
    EXPECT_NEAR(s.amplitude(0).real(), std::cos(theta), 1e-15);
    EXPECT_NEAR(s.amplitude(1).real(), std::sin(theta), 1e-15);
}

TEST(ApplyGate, RandomCircuitMatchesDenseOracle) {
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit c = random_circuit(gen, 6, 40);
        const StateVector start = random_state(gen, 6);
        StateVector s = start;
        s.apply(c);
        const Eigen::VectorXcd expected = testing::dense_circuit(c) * as_vector(start);
        EXPECT_LE((as_vector(s) - expected).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE(max_abs(circuit_unitary(c) - testing::dense_circuit(c)), 1e-12);
    }
}

TEST(ApplyGate, InvalidIndices) {
    StateVector s(2);
    EXPECT_THROW(s.apply(Gate::pauli_x(2)), IndexError);
    EXPECT_THROW(s.apply(Gate::cnot(1, 1)), IndexError);
    Circuit c(3);
    EXPECT_THROW(c.add(Gate::pauli_x(0, {{1, true}, {1, false}})), IndexError);
    EXPECT_THROW(c.add(Gate::mux_roty(0, {1}, {0.1})), IndexError);
    EXPECT_THROW(c.add(Gate::roty(-1, 0.1)), IndexError);
}

TEST(Multiplexed, EqualAnglesIsPlainRotation) {
    std::mt19937_64 gen(2);
    const StateVector start = random_state(gen, 4);
    const StateVector a = apply_multiplexed_roty(start, Gate::mux_roty(2, {0, 3, 1}, std::vector<double>(8, 0.4)));
    const StateVector b = apply_gate(start, Gate::roty(2, 0.4));
    EXPECT_LE((as_vector(a) - as_vector(b)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Multiplexed, ZeroAnglesIsIdentity) {
    std::mt19937_64 gen(3);
    const StateVector start = random_state(gen, 3);
    const StateVector a = apply_multiplexed_roty(start, Gate::mux_roty(0, {1, 2}, std::vector<double>(4, 0.0)));
    EXPECT_EQ(a.amplitudes(), start.amplitudes());
}

TEST(Multiplexed, MatchesDecomposition) {
    std::mt19937_64 gen(4);
    for (int k = 0; k <= 5; ++k) {
        const int n = 7;
        std::vector<int> qubits(n);
        std::iota(qubits.begin(), qubits.end(), 0);
        std::shuffle(qubits.begin(), qubits.end(), gen);
        const RyMultiplexor m{qubits[0], std::vector<int>(qubits.begin() + 1, qubits.begin() + 1 + k),
                              testing::random_angles(gen, std::size_t{1} << k)};
        const StateVector start = random_state(gen, n);
        StateVector direct = apply_multiplexed_roty(start, m.gate());
        StateVector expanded = start;
        expanded.apply(decompose_multiplexor(m, n));
        EXPECT_LE((as_vector(direct) - as_vector(expanded)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Measure, BellStateOutcomes) {
    StateVector bell(2);
    bell.apply(Gate::hadamard(0));
    bell.apply(Gate::cnot(1, 0));
    Rng rng(5, 0);
    int ones = 0;
    for (int shot = 0; shot < 2000; ++shot) {
        const auto [outcome, post] = measure_subset(bell, std::vector<int>{0, 1}, rng);
        ASSERT_TRUE(outcome == 0 || outcome == 3);
        EXPECT_NEAR(post.amplitude(outcome).real(), 1.0, 1e-12);
        ones += outcome == 3;
    }
    EXPECT_NEAR(ones / 2000.0, 0.5, 0.05);
}

TEST(Measure, CertainQubitLeavesRestUntouched) {
    std::mt19937_64 gen(6);
    const StateVector psi = random_state(gen, 2);
    std::vector<Amplitude> amp(8, 0.0);
    for (std::uint64_t b = 0; b < 4; ++b) {
        amp[(b << 1) | 1] = psi.amplitude(b);
    }
    Rng rng(6, 0);
    const auto [outcome, post] = measure_subset(StateVector::from_amplitudes(amp), std::vector<int>{0}, rng);
    EXPECT_EQ(outcome, 1U);
    for (std::uint64_t b = 0; b < 4; ++b) {
        EXPECT_NEAR(std::abs(post.amplitude((b << 1) | 1) - psi.amplitude(b)), 0.0, 1e-15);
    }
}

TEST(Measure, PartialCollapseRenormalizes) {
    std::mt19937_64 gen(7);
    const StateVector start = random_state(gen, 3);
    Rng rng(7, 0);
    const auto [outcome, post] = measure_subset(start, std::vector<int>{2}, rng);
    EXPECT_NEAR(post.norm(), 1.0, 1e-12);
    const double p = start.marginal(std::vector<int>{2})[outcome];
    for (std::uint64_t b = 0; b < 8; ++b) {
        const Amplitude expected = ((b >> 2) & 1) == outcome ? start.amplitude(b) / std::sqrt(p) : 0.0;
        EXPECT_NEAR(std::abs(post.amplitude(b) - expected), 0.0, 1e-12);
    }
}

TEST(Measure, ShotFrequenciesWithinThreeSigma) {
    std::mt19937_64 gen(8);
    const StateVector state = random_state(gen, 5);
    const std::vector<int> all{0, 1, 2, 3, 4};
    const auto born = state.marginal(all);
    std::vector<int> counts(32, 0);
    Rng rng(8, 0);
    const int shots = 100000;
    for (int shot = 0; shot < shots; ++shot) {
        StateVector copy = state;
        ++counts[copy.measure(all, rng)];
    }
    for (int b = 0; b < 32; ++b) {
        const double sigma = std::sqrt(shots * born[b] * (1 - born[b]));
        EXPECT_LE(std::abs(counts[b] - shots * born[b]), 3 * sigma + 1) << b;
    }
}

TEST(Marginal, BasisStateAndUniform) {
    const auto point = marginal_distribution(StateVector(3, 5), std::vector<int>{0, 1, 2});
    EXPECT_EQ(point, (std::vector<double>{0, 0, 0, 0, 0, 1, 0, 0}));
    StateVector uniform(3);
    for (int q = 0; q < 3; ++q) {
        uniform.apply(Gate::hadamard(q));
    }
    for (int q = 0; q < 3; ++q) {
        const auto m = uniform.marginal(std::vector<int>{q});
        EXPECT_NEAR(m[0], 0.5, 1e-15);
        EXPECT_NEAR(m[1], 0.5, 1e-15);
    }
}

TEST(Marginal, MatchesBruteForceSummation) {
    std::mt19937_64 gen(9);
    const StateVector state = random_state(gen, 5);
    const std::vector<int> qubits{3, 0};
    const auto m = state.marginal(qubits);
    std::vector<double> expected(4, 0.0);
    for (std::uint64_t b = 0; b < 32; ++b) {
        expected[((b >> 3) & 1) | (((b >> 0) & 1) << 1)] += std::norm(state.amplitude(b));
    }
    EXPECT_LE(max_abs_difference(m, expected), 1e-15);
    EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), 1.0, 1e-12);
}

TEST(Norm, PreservedOverLongCircuits) {
    std::mt19937_64 gen(10);
    StateVector s(20);
    s.apply(random_circuit(gen, 20, 1000));
    EXPECT_NEAR(s.norm(), 1.0, 1e-10);
}

TEST(Projectors, Algebra) {
    for (int n = 1; n <= 4; ++n) {
        const auto dim = static_cast<Eigen::Index>(1) << n;
        Cmat sum = Cmat::Zero(dim, dim);
        auto p = [n](int a) {
            std::vector<Cmat> ops(n);
            for (int q = 0; q < n; ++q) {
                ops[q] = testing::projector((a >> q) & 1);
            }
            return testing::tensor(ops);
        };
        for (int a = 0; a < dim; ++a) {
            sum += p(a);
            for (int b = 0; b < dim; ++b) {
                EXPECT_LE(max_abs(p(a) * p(b) - (a == b ? p(b) : Cmat::Zero(dim, dim))), 0.0);
            }
        }
        EXPECT_LE(max_abs(sum - Cmat::Identity(dim, dim)), 0.0);
    }
}

TEST(Serialization, RoundTrip) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = random_circuit(gen, 6, 30);
        c.add(Gate::reset(3));
        c.add(Gate::roty(1, 1e-300));
        c.add(Gate::roty(2, -0.1 + 1e-17));
        const std::string text = serialize(c);
        EXPECT_EQ(parse_circuit(text), c);
        EXPECT_EQ(serialize(parse_circuit(text)), text);
    }
}

TEST(Serialization, Format) {
    Circuit c(3);
    c.add(Gate::roty(0, 0.5));
    c.add(Gate::pauli_x(2, {{0, true}, {1, false}}));
    c.add(Gate::mux_roty(1, {0, 2}, {0, 0.25, 0.5, 1}));
    c.add(Gate::reset(1));
    EXPECT_EQ(serialize(c), "QUBITS 3\nROTY 0.5 t0\nX t2 c0:+ c1:-\nMUXROTY t1 c0 c2 | 0 0.25 0.5 1\nRESET t1\n");
    EXPECT_EQ(parse_circuit("# comment\n\nQUBITS 3\nROTY 0.5 t0\n\nX t2 c0:+ c1:-\nMUXROTY t1 c0 c2 | 0 0.25 0.5 1\nRESET t1\n"), c);
}

TEST(Serialization, ParseErrorsNameTheLine) {
    for (const char *bad : {"", "QUBITS x\n", "QUBITS 2\nFOO t0\n", "QUBITS 2\nROTY t0\n", "QUBITS 2\nX t5\n",
                            "QUBITS 2\nMUXROTY t0 c1 | 0.1\n", "QUBITS 2\nX t0 c1\n"}) {
        EXPECT_THROW(parse_circuit(bad), Error) << bad;
    }
    try {
        parse_circuit("QUBITS 2\nX t0\nFOO t1\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Sparse, MatchesDense) {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit c = random_circuit(gen, 7, 60);
        StateVector dense(7, 5);
        SparseState sparse(7, 5);
        dense.apply(c);
        sparse.apply(c);
        for (std::uint64_t b = 0; b < 128; ++b) {
            EXPECT_NEAR(std::abs(sparse.amplitude(b) - dense.amplitude(b)), 0.0, 1e-12);
        }
        const std::vector<int> qubits{6, 2, 3};
        EXPECT_LE(max_abs_difference(sparse.marginal(qubits), dense.marginal(qubits)), 1e-12);
        EXPECT_NEAR(sparse.probability_one(4), dense.marginal(std::vector<int>{4})[1], 1e-12);
    }
}

TEST(Sparse, ProjectRenormalizes) {
    SparseState s(2);
    s.apply(Gate::roty(0, 0.7));
    s.apply(Gate::cnot(1, 0));
    s.project(1, 1);
    EXPECT_NEAR(std::abs(s.amplitude(3)), 1.0, 1e-15);
    EXPECT_EQ(s.support(), 1U);
}

TEST(Reset, DenseResetRestoresZero) {
    StateVector s(2);
    s.apply(Gate::hadamard(0));
    s.apply(Gate::cnot(1, 0));
    Rng rng(13, 0);
    s.apply(Gate::reset(1), &rng);
    const auto m = s.marginal(std::vector<int>{1});
    EXPECT_NEAR(m[0], 1.0, 1e-15);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    StateVector certain(1, 1);
    certain.apply(Gate::reset(0));
    EXPECT_EQ(certain.amplitude(0), Amplitude(1.0));
}

TEST(Reset, MixtureKeepsBothBranches) {
    Circuit c(3);
    c.add(Gate::roty(0, 0.4));
    c.add(Gate::cnot(1, 0));
    c.add(Gate::reset(0));
    c.add(Gate::hadamard(0));
    c.add(Gate::cnot(2, 1));
    SparseMixture mix(3);
    mix.apply(c);
    EXPECT_EQ(mix.branches(), 2U);
    const auto m = mix.marginal(std::vector<int>{0, 2});
    const double p1 = std::sin(0.4) * std::sin(0.4);
    EXPECT_NEAR(m[0], 0.5 * (1 - p1), 1e-12);
    EXPECT_NEAR(m[1], 0.5 * (1 - p1), 1e-12);
    EXPECT_NEAR(m[2], 0.5 * p1, 1e-12);
    EXPECT_NEAR(m[3], 0.5 * p1, 1e-12);
    EXPECT_THROW(circuit_unitary(c), NumericError);
}

TEST(Width, CapIsEnforced) {
    ::setenv("QBN_MAX_QUBITS", "6", 1);
    EXPECT_EQ(max_qubits(), 6);
    EXPECT_THROW(StateVector(7), WidthError);
    EXPECT_NO_THROW(StateVector(6));
    ::unsetenv("QBN_MAX_QUBITS");
    EXPECT_EQ(max_qubits(), kDefaultMaxQubits);
    EXPECT_THROW(check_width(kDefaultMaxQubits + 1), WidthError);
}

}  // namespace
}  // namespace qbnet
