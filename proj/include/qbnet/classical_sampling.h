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

#ifndef QBNET_CLASSICAL_SAMPLING_H
#define QBNET_CLASSICAL_SAMPLING_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbnet/bayes_net.h"
#include "qbnet/posterior.h"
#include "qbnet/rng.h"

namespace qbnet {

/// Default cap on joint states for dense transition matrices.
inline constexpr std::uint64_t kDefaultMatrixCap = std::uint64_t{1} << 11;

enum class PolicyKind { General, Rejection, LikelihoodWeighted };

/// Sampling tables Q(x_i | pa(i)) for importance sampling. Q equals P on
/// every non-evidence node.
class SamplingPolicy {
   public:
    /// Q = P everywhere.
    static SamplingPolicy rejection(const BayesNet &net);
    /// Q = P off the evidence, point mass on the observed state on it.
    static SamplingPolicy likelihood_weighted(const BayesNet &net, const Query &query);
    /// Caller-supplied tables; checked against the Q = P constraint.
    static SamplingPolicy general(const BayesNet &net, const Query &query, std::vector<Cpt> tables);

    PolicyKind kind() const { return kind_; }
    const Cpt &table(NodeId i) const { return tables_.at(i); }
    const std::vector<Cpt> &tables() const { return tables_; }

    /// Throws ParseError if the tables break the constraints of the kind.
    void validate(const BayesNet &net, const Query &query) const;

   private:
    PolicyKind kind_ = PolicyKind::General;
    std::vector<Cpt> tables_;
};

/// prod_i Q(x_i | pa(i)).
double sampling_probability(const BayesNet &net, const SamplingPolicy &policy, std::span<const int> x);

/// L_E(x) = prod_{i in E} P(x_i | pa(i)) / Q(x_i | pa(i)). Terms with Q = 0
/// make the ratio undefined; the function returns 0 for them.
double likelihood_ratio(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                        std::span<const int> x);

/// Draws the state of `node` given its parent configuration and sampling row.
using NodeDraw = std::function<int(NodeId node, std::size_t parent_config, std::span<const double> row, Rng &rng)>;

/// Importance sampling with the per-node draw supplied by the caller. Nodes
/// are visited in topological order; sample k uses Rng(seed, k).
PosteriorTable importance_sample_with(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                                      std::uint64_t n_samples, std::uint64_t seed, const NodeDraw &draw);

/// Importance sampling with inverse-CDF draws. Throws AllRejectedError if no
/// sample carries weight.
PosteriorTable importance_sample(const BayesNet &net, const Query &query, const SamplingPolicy &policy,
                                 std::uint64_t n_samples, std::uint64_t seed);

enum class Sweep { Random, Deterministic };

struct ChainConfig {
    /// Total node visits T.
    std::uint64_t steps = 0;
    /// Defaults to steps / 10.
    std::optional<std::uint64_t> burn_in;
    Sweep sweep = Sweep::Random;
    /// Deterministic sweeps: record once every `beta` full passes.
    int beta = 1;
    std::uint64_t seed = 0;
    /// Selects the RNG streams; independent chains use distinct indices.
    std::uint64_t chain = 0;
    /// Overrides the forward-sampled starting point.
    std::optional<Assignment> initial_state;
    /// Called after every visit with (t, i, x^{t+1}).
    std::function<void(std::uint64_t, NodeId, const Assignment &)> on_visit;

    std::uint64_t burn() const { return burn_in.value_or(steps / 10); }
    void validate() const;
};

/// Forward sample with evidence clamped. Up to 1000 attempts are made to land
/// on a state of positive probability; the last attempt is returned otherwise.
Assignment initial_chain_state(const BayesNet &net, const Query &query, Rng &rng);

/// Gibbs sampling visiting nodes uniformly at random; records x^{t+1} for
/// every t > t_burn.
PosteriorTable gibbs_sample_random(const BayesNet &net, const Query &query, const ChainConfig &config);

/// Gibbs sampling sweeping nodes 0..N-1 in order; records after every
/// `beta` sweeps once t > t_burn.
PosteriorTable gibbs_sample_sweep(const BayesNet &net, const Query &query, const ChainConfig &config);

/// Resampling distribution of node i used by transition matrices and circuits:
/// the blanket conditional, or uniform where that is identically zero
/// (reachable only from zero-probability states).
std::vector<double> gibbs_kernel_row(const BayesNet &net, NodeId i, std::span<const int> x);

/// Column-stochastic single-node Gibbs transition T(i): entry (to, from) over
/// joint states encoded by BayesNet::encode. Identity for i in E.
Eigen::MatrixXd gibbs_transition_matrix(const BayesNet &net, const Query &query, NodeId i,
                                        std::uint64_t cap = kDefaultMatrixCap);

/// Per-node proposal Q_i(y | x_i, x_MB(i)).
class MhProposal {
   public:
    enum class Kind { Uniform, Blanket, Identity, Table };

    /// Q_i(y | .) = 1 / |val(x_i)|.
    static MhProposal uniform();
    /// Q_i = blanket conditional; turns MH into Gibbs.
    static MhProposal blanket();
    /// Q_i(y | x_i) = [y == x_i].
    static MhProposal identity();
    /// Q_i(y | x_i) = tables[i][x_i][y], independent of the blanket.
    static MhProposal table(std::vector<std::vector<std::vector<double>>> tables);

    Kind kind() const { return kind_; }

    std::vector<double> row(const BayesNet &net, NodeId i, std::span<const int> x) const;

    /// Every row of a Table proposal must be a distribution within 1e-12.
    void validate(const BayesNet &net) const;

   private:
    Kind kind_ = Kind::Uniform;
    std::vector<std::vector<std::vector<double>>> tables_;
};

/// alpha_i for moving node i from x_i to y. Throws ZeroProposalError when
/// Q_i(y | x_i, .) is zero. When P(x_i | MB) = 0 the move is always accepted.
double mh_acceptance(const BayesNet &net, const MhProposal &proposal, NodeId i, std::span<const int> x, int y);

/// qbar_i(y | x) = alpha_i * Q_i(y | x_i, MB) for every y; zero where Q is zero.
/// A degenerate blanket conditional yields all zeros (the chain stays put).
std::vector<double> mh_qbar(const BayesNet &net, const MhProposal &proposal, NodeId i, std::span<const int> x);

/// Distribution of the new x_i after one MH visit of node i:
/// qbar_i(y | x) + [y == x_i] (1 - sum_y qbar_i(y | x)).
std::vector<double> mh_kernel_row(const BayesNet &net, const MhProposal &proposal, NodeId i,
                                  std::span<const int> x);

PosteriorTable metropolis_hastings_sample(const BayesNet &net, const Query &query, const MhProposal &proposal,
                                          const ChainConfig &config);

Eigen::MatrixXd mh_transition_matrix(const BayesNet &net, const Query &query, const MhProposal &proposal,
                                     NodeId i, std::uint64_t cap = kDefaultMatrixCap);

/// Exact joint conditioned on the evidence, indexed like the transition matrices.
Eigen::VectorXd evidence_conditioned_joint(const BayesNet &net, const Query &query,
                                           std::uint64_t cap = kDefaultMatrixCap);

}  // namespace qbnet

#endif
