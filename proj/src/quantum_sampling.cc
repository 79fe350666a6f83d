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

#include "qbnet/quantum_sampling.h"

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "qbnet/errors.h"
#include "qbnet/qembed.h"
#include "qbnet/state_vector.h"

namespace qbnet {

namespace {

struct DrawCache {
    std::map<NodeId, QEmbedding> embeddings;
    std::map<std::pair<NodeId, std::size_t>, Circuit> reduced;
    std::map<std::pair<NodeId, std::size_t>, std::deque<int>> pending;
};

std::vector<int> all_qubits(int n) {
    std::vector<int> q(n);
    for (int k = 0; k < n; ++k) {
        q[k] = k;
    }
    return q;
}

int run_reduced(const Circuit &c, const QuantumSamplerConfig &config, Rng &rng) {
    const std::vector<int> focus = all_qubits(c.n_qubits());
    StateVector state(c.n_qubits());
    state.apply(c);
    if (config.exact) {
        return static_cast<int>(rng.categorical(state.marginal(focus)));
    }
    return static_cast<int>(state.measure(focus, rng));
}

template <class Build>
PosteriorTable run_quantum_chain(const BayesNet &net, const Query &query, const QuantumSamplerConfig &config,
                                 Build build) {
    query.validate(net);
    if (config.beta < 1) {
        throw ParseError("beta must be at least 1");
    }
    const std::uint64_t per_step = static_cast<std::uint64_t>(config.beta) * net.size();
    const std::uint64_t macro_steps = config.samples / per_step;
    if (macro_steps == 0) {
        throw ParseError("step count " + std::to_string(config.samples) + " is below one macro-step of " +
                         std::to_string(per_step) + " node visits");
    }
    if (config.burn() >= config.samples) {
        throw ParseError("burn-in must be below the step count");
    }
    Rng init = chain_rng(config.seed, config.chain, ChainStream::Init);
    Rng measure = chain_rng(config.seed, config.chain, ChainStream::Measure);
    Assignment x = config.initial_state ? *config.initial_state : initial_chain_state(net, query, init);

    const GibbsNet g = build(x);
    const GibbsCircuit circuit = gibbs_net_circuit(g, false);
    const std::vector<int> final_qubits = circuit.final_qubits();

    PosteriorTable table(net, query.hypotheses);
    for (std::uint64_t step = 0; step < macro_steps; ++step) {
        std::uint64_t outcome = 0;
        if (config.exact) {
            SparseMixture state(circuit.circuit.n_qubits(), circuit.initial_basis(x));
            state.apply(circuit.circuit);
            outcome = measure.categorical(state.marginal(final_qubits));
        } else {
            SparseState state(circuit.circuit.n_qubits(), circuit.initial_basis(x));
            state.apply(circuit.circuit, &measure);
            outcome = state.measure(final_qubits, measure);
        }
        Assignment next = circuit.decode_final(g, outcome);
        if (config.on_macro_step) {
            config.on_macro_step(x, next);
        }
        x = std::move(next);
        if ((step + 1) * per_step - 1 > config.burn()) {
            table.add_assignment(x, 1.0);
        }
    }
    return table;
}

}  // namespace

NodeDraw quantum_node_draw(const SamplingPolicy &policy, const QuantumSamplerConfig &config) {
    if (config.shots < 1) {
        throw ParseError("shots must be at least 1");
    }
    auto cache = std::make_shared<DrawCache>();
    return [cache, policy, config](NodeId node, std::size_t parent_config, std::span<const double>, Rng &rng) {
        const auto key = std::make_pair(node, parent_config);
        auto &queue = cache->pending[key];
        if (queue.empty()) {
            auto it = cache->reduced.find(key);
            if (it == cache->reduced.end()) {
                auto emb = cache->embeddings.find(node);
                if (emb == cache->embeddings.end()) {
                    emb = cache->embeddings.emplace(node, embed_cpt(policy.table(node))).first;
                }
                const QEmbedding &e = emb->second;
                it = cache->reduced.emplace(key, e.reduce(e.parent_basis_of_config(parent_config))).first;
            }
            for (int s = 0; s < config.shots; ++s) {
                queue.push_back(run_reduced(it->second, config, rng));
            }
        }
        const int value = queue.front();
        queue.pop_front();
        return value;
    };
}

PosteriorTable q_importance_sample(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                                   const QuantumSamplerConfig &config) {
    return importance_sample_with(net, query, policy, config.samples, config.seed,
                                  quantum_node_draw(policy, config));
}

PosteriorTable q_gibbs_sample(const BayesNet &net, const Query &query, const QuantumSamplerConfig &config) {
    return run_quantum_chain(net, query, config,
                             [&](const Assignment &x) { return build_gibbs_net(net, query, config.beta, x); });
}

PosteriorTable q_metropolis_hastings_sample(const BayesNet &net, const Query &query, const MhProposal &proposal,
                                            const QuantumSamplerConfig &config) {
    return run_quantum_chain(net, query, config, [&](const Assignment &x) {
        return build_mh_net(net, query, proposal, config.beta, x);
    });
}

}  // namespace qbnet
