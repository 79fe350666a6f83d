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

#include "qbnet/classical_sampling.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qbnet/errors.h"

namespace qbnet {

namespace {

constexpr int kInitialStateAttempts = 1000;

bool same_shape(const Cpt &a, const Cpt &b) {
    return a.cardinality() == b.cardinality() && a.parent_cardinalities() == b.parent_cardinalities();
}

bool tables_equal(const Cpt &a, const Cpt &b) {
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        if (std::abs(a.entries()[k] - b.entries()[k]) > kRowSumTolerance) {
            return false;
        }
    }
    return true;
}

Cpt point_mass_table(const Cpt &like, int state) {
    std::vector<int> states(like.num_configs(), state);
    return Cpt::deterministic(like.cardinality(), like.parent_cardinalities(), states);
}

std::vector<double> uniform_row(int card) { return std::vector<double>(card, 1.0 / card); }

void check_matrix_size(const BayesNet &net, std::uint64_t cap) {
    const std::uint64_t n = net.state_space_size();
    if (n > cap) {
        throw TooLargeError("joint state space has " + std::to_string(n) + " states, above the cap of " +
                            std::to_string(cap));
    }
}

template <class Row>
Eigen::MatrixXd single_node_matrix(const BayesNet &net, const Query &query, NodeId i, std::uint64_t cap,
                                   Row row_of) {
    if (i >= net.size()) {
        throw IndexError("transition matrix: node id out of range");
    }
    check_matrix_size(net, cap);
    const auto n = static_cast<Eigen::Index>(net.state_space_size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index from = 0; from < n; ++from) {
        Assignment x = net.decode(static_cast<std::uint64_t>(from));
        if (query.is_evidence(i)) {
            m(from, from) = 1.0;
            continue;
        }
        const std::vector<double> row = row_of(x);
        for (int v = 0; v < net.cardinality(i); ++v) {
            x[i] = v;
            m(static_cast<Eigen::Index>(net.encode(x)), from) += row[v];
        }
    }
    return m;
}

void record(PosteriorTable &table, const Assignment &x) { table.add_assignment(x, 1.0); }

template <class Visit>
PosteriorTable run_chain(const BayesNet &net, const Query &query, const ChainConfig &config, Sweep sweep,
                         Visit visit) {
    query.validate(net);
    config.validate();
    Rng init = chain_rng(config.seed, config.chain, ChainStream::Init);
    Rng moves = chain_rng(config.seed, config.chain, ChainStream::Moves);
    Rng accept = chain_rng(config.seed, config.chain, ChainStream::Accept);

    Assignment x;
    if (config.initial_state) {
        x = *config.initial_state;
        if (x.size() != net.size()) {
            throw ParseError("initial state has " + std::to_string(x.size()) + " values, expected " +
                             std::to_string(net.size()));
        }
        for (NodeId i = 0; i < net.size(); ++i) {
            if (x[i] < 0 || x[i] >= net.cardinality(i)) {
                throw ParseError("initial state of node '" + net.node(i).name + "' is out of range");
            }
        }
        if (!query.consistent(x)) {
            throw ParseError("initial state disagrees with the evidence");
        }
    } else {
        x = initial_chain_state(net, query, init);
    }

    PosteriorTable table(net, query.hypotheses);
    const std::uint64_t n = net.size();
    const std::uint64_t burn = config.burn();
    for (std::uint64_t t = 0; t < config.steps; ++t) {
        const NodeId i = sweep == Sweep::Random ? static_cast<NodeId>(moves.uniform_index(n)) : t % n;
        if (!query.is_evidence(i)) {
            visit(i, x, moves, accept);
        }
        if (config.on_visit) {
            config.on_visit(t, i, x);
        }
        if (sweep == Sweep::Random) {
            if (t > burn) {
                record(table, x);
            }
        } else if ((t + 1) % n == 0) {
            const std::uint64_t graphs = (t + 1) / n;
            if (graphs % static_cast<std::uint64_t>(config.beta) == 0 && t > burn) {
                record(table, x);
            }
        }
    }
    return table;
}

}  // namespace

SamplingPolicy SamplingPolicy::rejection(const BayesNet &net) {
    SamplingPolicy p;
    p.kind_ = PolicyKind::Rejection;
    for (const Node &node : net.nodes()) {
        p.tables_.push_back(node.cpt);
    }
    return p;
}

SamplingPolicy SamplingPolicy::likelihood_weighted(const BayesNet &net, const Query &query) {
    query.validate(net);
    SamplingPolicy p;
    p.kind_ = PolicyKind::LikelihoodWeighted;
    for (NodeId i = 0; i < net.size(); ++i) {
        const Cpt &cpt = net.node(i).cpt;
        p.tables_.push_back(query.is_evidence(i) ? point_mass_table(cpt, query.evidence.at(i)) : cpt);
    }
    return p;
}

SamplingPolicy SamplingPolicy::general(const BayesNet &net, const Query &query, std::vector<Cpt> tables) {
    SamplingPolicy p;
    p.kind_ = PolicyKind::General;
    p.tables_ = std::move(tables);
    p.validate(net, query);
    return p;
}

void SamplingPolicy::validate(const BayesNet &net, const Query &query) const {
    if (tables_.size() != net.size()) {
        throw ParseError("sampling policy has " + std::to_string(tables_.size()) + " tables, expected " +
                         std::to_string(net.size()));
    }
    for (NodeId i = 0; i < net.size(); ++i) {
        const std::string &name = net.node(i).name;
        const Cpt &q = tables_[i];
        const Cpt &p = net.node(i).cpt;
        if (!same_shape(q, p)) {
            throw ParseError("sampling table of node '" + name + "' has the wrong shape");
        }
        try {
            q.validate();
        } catch (const InvalidCptError &e) {
            throw InvalidCptError("sampling table of node '" + name + "': " + e.what());
        }
        const bool evidence = query.is_evidence(i);
        if ((!evidence || kind_ == PolicyKind::Rejection) && !tables_equal(q, p)) {
            throw ParseError("sampling table of node '" + name + "' must equal its CPT");
        }
        if (evidence && kind_ == PolicyKind::LikelihoodWeighted &&
            !tables_equal(q, point_mass_table(p, query.evidence.at(i)))) {
            throw ParseError("sampling table of evidence node '" + name + "' must be a point mass");
        }
    }
}

double sampling_probability(const BayesNet &net, const SamplingPolicy &policy, std::span<const int> x) {
    double q = 1.0;
    for (NodeId i : net.topological_order()) {
        q *= policy.table(i).prob(x[i], net.parent_config(i, x));
    }
    return q;
}

double likelihood_ratio(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                        std::span<const int> x) {
    double l = 1.0;
    for (const auto &[i, state] : query.evidence) {
        (void)state;
        const std::size_t config = net.parent_config(i, x);
        const double q = policy.table(i).prob(x[i], config);
        if (q == 0) {
            return 0.0;
        }
        l *= net.node(i).cpt.prob(x[i], config) / q;
    }
    return l;
}

PosteriorTable importance_sample_with(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                                      std::uint64_t n_samples, std::uint64_t seed, const NodeDraw &draw) {
    query.validate(net);
    policy.validate(net, query);
    PosteriorTable table(net, query.hypotheses);
    Assignment x(net.size(), 0);
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        Rng rng(seed, k);
        double weight = 1.0;
        bool rejected = false;
        for (NodeId i : net.topological_order()) {
            const std::size_t config = net.parent_config(i, x);
            const std::span<const double> row = policy.table(i).row(config);
            x[i] = draw(i, config, row, rng);
            const auto hit = query.evidence.find(i);
            if (hit == query.evidence.end()) {
                continue;
            }
            if (x[i] != hit->second) {
                rejected = true;
                break;
            }
            weight *= net.node(i).cpt.prob(x[i], config) / row[x[i]];
        }
        if (rejected) {
            table.add_rejected();
        } else {
            table.add_assignment(x, weight);
        }
    }
    if (!(table.total_weight() > 0)) {
        throw AllRejectedError("importance sampling: no sample out of " + std::to_string(n_samples) +
                               " carried weight");
    }
    return table;
}

PosteriorTable importance_sample(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                                 std::uint64_t n_samples, std::uint64_t seed) {
    return importance_sample_with(net, query, policy, n_samples, seed,
                                  [](NodeId, std::size_t, std::span<const double> row, Rng &rng) {
                                      return static_cast<int>(rng.categorical(row));
                                  });
}

void ChainConfig::validate() const {
    if (beta < 1) {
        throw ParseError("beta must be at least 1");
    }
    if (steps > 0 && burn() >= steps) {
        throw ParseError("burn-in " + std::to_string(burn()) + " must be below the step count " +
                         std::to_string(steps));
    }
}

Assignment initial_chain_state(const BayesNet &net, const Query &query, Rng &rng) {
    Assignment x(net.size(), 0);
    for (int attempt = 0; attempt < kInitialStateAttempts; ++attempt) {
        for (NodeId i : net.topological_order()) {
            const auto hit = query.evidence.find(i);
            if (hit != query.evidence.end()) {
                x[i] = hit->second;
            } else {
                x[i] = static_cast<int>(rng.categorical(net.node(i).cpt.row(net.parent_config(i, x))));
            }
        }
        if (joint_probability(net, x) > 0) {
            break;
        }
    }
    return x;
}

PosteriorTable gibbs_sample_random(const BayesNet &net, const Query &query, const ChainConfig &config) {
    return run_chain(net, query, config, Sweep::Random, [&](NodeId i, Assignment &x, Rng &moves, Rng &) {
        x[i] = static_cast<int>(moves.categorical(conditional_given_blanket(net, i, x)));
    });
}

PosteriorTable gibbs_sample_sweep(const BayesNet &net, const Query &query, const ChainConfig &config) {
    return run_chain(net, query, config, Sweep::Deterministic, [&](NodeId i, Assignment &x, Rng &moves, Rng &) {
        x[i] = static_cast<int>(moves.categorical(conditional_given_blanket(net, i, x)));
    });
}

std::vector<double> gibbs_kernel_row(const BayesNet &net, NodeId i, std::span<const int> x) {
    std::vector<double> row;
    if (!try_conditional_given_blanket(net, i, x, row)) {
        row = uniform_row(net.cardinality(i));
    }
    return row;
}

Eigen::MatrixXd gibbs_transition_matrix(const BayesNet &net, const Query &query, NodeId i, std::uint64_t cap) {
    return single_node_matrix(net, query, i, cap, [&](const Assignment &x) { return gibbs_kernel_row(net, i, x); });
}

MhProposal MhProposal::uniform() {
    MhProposal p;
    p.kind_ = Kind::Uniform;
    return p;
}

MhProposal MhProposal::blanket() {
    MhProposal p;
    p.kind_ = Kind::Blanket;
    return p;
}

MhProposal MhProposal::identity() {
    MhProposal p;
    p.kind_ = Kind::Identity;
    return p;
}

MhProposal MhProposal::table(std::vector<std::vector<std::vector<double>>> tables) {
    MhProposal p;
    p.kind_ = Kind::Table;
    p.tables_ = std::move(tables);
    return p;
}

std::vector<double> MhProposal::row(const BayesNet &net, NodeId i, std::span<const int> x) const {
    const int card = net.cardinality(i);
    switch (kind_) {
        case Kind::Uniform:
            return uniform_row(card);
        case Kind::Blanket:
            return gibbs_kernel_row(net, i, x);
        case Kind::Identity: {
            std::vector<double> r(card, 0.0);
            r[x[i]] = 1.0;
            return r;
        }
        case Kind::Table:
            return tables_.at(i).at(x[i]);
    }
    return {};
}

void MhProposal::validate(const BayesNet &net) const {
    if (kind_ != Kind::Table) {
        return;
    }
    if (tables_.size() != net.size()) {
        throw ParseError("proposal has " + std::to_string(tables_.size()) + " node tables, expected " +
                         std::to_string(net.size()));
    }
    for (NodeId i = 0; i < net.size(); ++i) {
        const std::string &name = net.node(i).name;
        const auto card = static_cast<std::size_t>(net.cardinality(i));
        if (tables_[i].size() != card) {
            throw ParseError("proposal for node '" + name + "' needs one row per state");
        }
        for (const auto &r : tables_[i]) {
            if (r.size() != card) {
                throw ParseError("proposal row for node '" + name + "' has the wrong length");
            }
            double sum = 0;
            for (double v : r) {
                if (!(v >= 0) || !std::isfinite(v)) {
                    throw ParseError("proposal for node '" + name + "' has a negative or non-finite entry");
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                throw ParseError("proposal row for node '" + name + "' does not sum to 1");
            }
        }
    }
}

double mh_acceptance(const BayesNet &net, const MhProposal &proposal, NodeId i, std::span<const int> x, int y) {
    const std::vector<double> forward = proposal.row(net, i, x);
    if (forward[y] == 0) {
        throw ZeroProposalError("proposal for node '" + net.node(i).name + "' gives zero probability to state " +
                                std::to_string(y));
    }
    const std::vector<double> target = conditional_given_blanket(net, i, x);
    const int current = x[i];
    if (target[current] == 0) {
        return 1.0;
    }
    Assignment moved(x.begin(), x.end());
    moved[i] = y;
    const std::vector<double> reverse = proposal.row(net, i, moved);
    return std::min(1.0, (reverse[current] * target[y]) / (forward[y] * target[current]));
}

std::vector<double> mh_qbar(const BayesNet &net, const MhProposal &proposal, NodeId i, std::span<const int> x) {
    const int card = net.cardinality(i);
    std::vector<double> qbar(card, 0.0);
    const std::vector<double> forward = proposal.row(net, i, x);
    std::vector<double> target;
    if (!try_conditional_given_blanket(net, i, x, target)) {
        // Every value has zero probability, so every move is accepted.
        return forward;
    }
    const int current = x[i];
    Assignment moved(x.begin(), x.end());
    for (int y = 0; y < card; ++y) {
        if (forward[y] == 0) {
            continue;
        }
        double alpha = 1.0;
        if (target[current] != 0) {
            moved[i] = y;
            const std::vector<double> reverse = proposal.row(net, i, moved);
            alpha = std::min(1.0, (reverse[current] * target[y]) / (forward[y] * target[current]));
        }
        qbar[y] = alpha * forward[y];
    }
    return qbar;
}

std::vector<double> mh_kernel_row(const BayesNet &net, const MhProposal &proposal, NodeId i,
                                  std::span<const int> x) {
    std::vector<double> row = mh_qbar(net, proposal, i, x);
    double moved = 0;
    for (int y = 0; y < static_cast<int>(row.size()); ++y) {
        if (y != x[i]) {
            moved += row[y];
        }
    }
    row[x[i]] = std::max(0.0, 1.0 - moved);
    return row;
}

PosteriorTable metropolis_hastings_sample(const BayesNet &net, const Query &query, const MhProposal &proposal,
                                          const ChainConfig &config) {
    proposal.validate(net);
    return run_chain(net, query, config, config.sweep, [&](NodeId i, Assignment &x, Rng &moves, Rng &accept) {
        const int y = static_cast<int>(moves.categorical(proposal.row(net, i, x)));
        const double u = accept.uniform();
        if (u < mh_acceptance(net, proposal, i, x, y)) {
            x[i] = y;
        }
    });
}

Eigen::MatrixXd mh_transition_matrix(const BayesNet &net, const Query &query, const MhProposal &proposal,
                                     NodeId i, std::uint64_t cap) {
    proposal.validate(net);
    return single_node_matrix(net, query, i, cap,
                              [&](const Assignment &x) { return mh_kernel_row(net, proposal, i, x); });
}

Eigen::VectorXd evidence_conditioned_joint(const BayesNet &net, const Query &query, std::uint64_t cap) {
    check_matrix_size(net, cap);
    const auto n = static_cast<Eigen::Index>(net.state_space_size());
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const Assignment x = net.decode(static_cast<std::uint64_t>(s));
        if (query.consistent(x)) {
            pi(s) = joint_probability(net, x);
        }
    }
    const double total = pi.sum();
    if (!(total > 0)) {
        throw ZeroEvidenceError("the evidence has probability zero");
    }
    return pi / total;
}

}  // namespace qbnet
