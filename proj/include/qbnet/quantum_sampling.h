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

#ifndef QBNET_QUANTUM_SAMPLING_H
#define QBNET_QUANTUM_SAMPLING_H

#include <cstdint>
#include <functional>
#include <optional>

#include "qbnet/bayes_net.h"
#include "qbnet/classical_sampling.h"
#include "qbnet/posterior.h"

namespace qbnet {

struct QuantumSamplerConfig {
    /// Importance sampling: number of samples. Chains: node visits T, run
    /// as T / (beta * N) macro-steps.
    std::uint64_t samples = 0;
    /// Node visits to discard; defaults to samples / 10.
    std::optional<std::uint64_t> burn_in;
    int beta = 1;
    std::uint64_t seed = 0;
    std::uint64_t chain = 0;
    /// Outcomes drawn per circuit execution; importance sampling keeps the
    /// surplus for later draws with the same circuit.
    int shots = 1;
    /// Draw from the exact output distribution instead of simulating shots.
    bool exact = false;
    std::optional<Assignment> initial_state;
    /// Called with every macro-step's starting and resulting states.
    std::function<void(const Assignment &, const Assignment &)> on_macro_step;

    std::uint64_t burn() const { return burn_in.value_or(samples / 10); }
};

/// Per-node draw that runs the parent-selected rotations of the node's
/// q-embedding and measures the focus register. Circuits are cached per
/// (node, parent configuration).
NodeDraw quantum_node_draw(const SamplingPolicy &policy, const QuantumSamplerConfig &config);

/// Importance sampling with every node drawn by quantum_node_draw.
PosteriorTable q_importance_sample(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                                   const QuantumSamplerConfig &config);

/// Each macro-step builds the Gibbs transition circuit, loads the current
/// state into its first slice, runs it and measures the last slice.
PosteriorTable q_gibbs_sample(const BayesNet &net, const Query &query, const QuantumSamplerConfig &config);

/// As q_gibbs_sample with every slice resampled by the single-node MH
/// transition.
PosteriorTable q_metropolis_hastings_sample(const BayesNet &net, const Query &query, const MhProposal &proposal,
                                            const QuantumSamplerConfig &config);

}  // namespace qbnet

#endif
