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

#ifndef QBNET_STATE_VECTOR_H
#define QBNET_STATE_VECTOR_H

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbnet/circuit.h"
#include "qbnet/rng.h"

namespace qbnet {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 24;

/// Simulator width cap: QBN_MAX_QUBITS if set to a positive integer, else 24.
int max_qubits();

/// Throws WidthError if n exceeds max_qubits().
void check_width(int n_qubits);

/// Dense state over 2^n amplitudes. Basis index bit q is qubit q.
class StateVector {
   public:
    /// Basis state |basis>.
    explicit StateVector(int n_qubits, std::uint64_t basis = 0);
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

    int n_qubits() const { return n_qubits_; }
    const std::vector<Amplitude> &amplitudes() const { return amp_; }
    Amplitude amplitude(std::uint64_t basis) const { return amp_.at(basis); }
    double norm() const;

    /// Applies one gate in place. Reset needs `rng` unless the qubit is
    /// already certainly |0> or |1>.
    void apply(const Gate &gate, Rng *rng = nullptr);
    void apply(const Circuit &circuit, Rng *rng = nullptr);

    /// Exact distribution over the listed qubits; outcome bit k is qubits[k].
    std::vector<double> marginal(std::span<const int> qubits) const;

    /// Born-rule draw over the listed qubits followed by collapse.
    std::uint64_t measure(std::span<const int> qubits, Rng &rng);

   private:
    void apply_single(const Gate &gate, const Amplitude m[4]);
    void apply_mux(const Gate &gate);
    void apply_reset(int q, Rng *rng);

    int n_qubits_ = 0;
    std::vector<Amplitude> amp_;
};

StateVector apply_gate(StateVector state, const Gate &gate);
StateVector apply_multiplexed_roty(StateVector state, const Gate &gate);
std::pair<std::uint64_t, StateVector> measure_subset(StateVector state, std::span<const int> qubits, Rng &rng);
std::vector<double> marginal_distribution(const StateVector &state, std::span<const int> qubits);

/// Basis-sparse state: only nonzero amplitudes are stored. Suited to
/// circuits whose state stays close to a few basis states, such as the
/// Gibbs transition circuits.
class SparseState {
   public:
    explicit SparseState(int n_qubits, std::uint64_t basis = 0);

    int n_qubits() const { return n_qubits_; }
    std::size_t support() const { return terms_.size(); }
    const std::vector<std::pair<std::uint64_t, Amplitude>> &terms() const { return terms_; }
    Amplitude amplitude(std::uint64_t basis) const;
    double norm() const;

    void apply(const Gate &gate, Rng *rng = nullptr);
    void apply(const Circuit &circuit, Rng *rng = nullptr);

    /// Probability that qubit q reads 1.
    double probability_one(int q) const;
    /// Keeps only terms with qubit q equal to `value`, renormalized.
    void project(int q, int value);

    std::vector<double> marginal(std::span<const int> qubits) const;
    std::uint64_t measure(std::span<const int> qubits, Rng &rng);

   private:
    template <class Map>
    void transform(const Gate &gate, Map map);

    int n_qubits_ = 0;
    std::vector<std::pair<std::uint64_t, Amplitude>> terms_;
};

/// Classical mixture of sparse states: each Reset on a qubit that is not
/// certainly |0> or |1> splits every branch into its two measurement
/// outcomes. Gives exact output distributions of circuits with resets.
class SparseMixture {
   public:
    explicit SparseMixture(int n_qubits, std::uint64_t basis = 0);

    std::size_t branches() const { return branches_.size(); }

    void apply(const Gate &gate);
    void apply(const Circuit &circuit);

    std::vector<double> marginal(std::span<const int> qubits) const;

   private:
    std::vector<std::pair<double, SparseState>> branches_;
};

/// Matrix of a reset-free circuit, column b being the output for |b>.
/// Throws WidthError above 12 qubits.
Eigen::MatrixXcd circuit_unitary(const Circuit &circuit);

}  // namespace qbnet

#endif
