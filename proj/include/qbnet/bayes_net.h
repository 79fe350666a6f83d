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

#ifndef QBNET_BAYES_NET_H
#define QBNET_BAYES_NET_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qbnet {

class PosteriorTable;

using NodeId = std::size_t;

/// One state index per node, in node-id order.
using Assignment = std::vector<int>;

/// Default cap on the number of joint states an exhaustive routine may visit.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Tolerance for CPT rows summing to one.
inline constexpr double kRowSumTolerance = 1e-12;

/// Conditional probability table P(x | parents).
///
/// Rows are parent configurations in row-major order with the first listed
/// parent as the most significant digit. Within a row, the node state is the
/// fastest-varying index: entries()[config * cardinality + state].
class Cpt {
   public:
    Cpt() = default;
    Cpt(int cardinality, std::vector<int> parent_cardinalities, std::vector<double> entries);

    int cardinality() const { return cardinality_; }
    const std::vector<int> &parent_cardinalities() const { return parent_cardinalities_; }
    const std::vector<double> &entries() const { return entries_; }
    std::size_t num_configs() const { return num_configs_; }

    std::span<const double> row(std::size_t config) const;
    double prob(int state, std::size_t config) const { return entries_[config * cardinality_ + state]; }

    /// Mixed-radix index of a parent configuration (first parent most significant).
    std::size_t config_index(std::span<const int> parent_values) const;
    std::vector<int> config_values(std::size_t config) const;

    /// Throws InvalidCptError describing the first violated invariant.
    void validate() const;

    /// Point-mass table P(x | parents) = [x == f(parents)].
    static Cpt deterministic(int cardinality, std::vector<int> parent_cardinalities,
                             const std::vector<int> &state_per_config);

   private:
    int cardinality_ = 1;
    std::vector<int> parent_cardinalities_;
    std::vector<double> entries_{1.0};
    std::size_t num_configs_ = 1;
};

struct Node {
    std::string name;
    int cardinality = 2;
    std::vector<NodeId> parents;
    Cpt cpt;
};

/// Discrete Bayesian network. Immutable once constructed.
class BayesNet {
   public:
    BayesNet() = default;

    /// Validates parent ids, CPT shapes and acyclicity. Throws CycleError,
    /// InvalidCptError or ParseError naming the first offending node.
    explicit BayesNet(std::vector<Node> nodes);

    std::size_t size() const { return nodes_.size(); }
    const Node &node(NodeId i) const { return nodes_.at(i); }
    const std::vector<Node> &nodes() const { return nodes_; }
    int cardinality(NodeId i) const { return nodes_[i].cardinality; }
    const std::vector<NodeId> &parents(NodeId i) const { return nodes_[i].parents; }
    const std::vector<NodeId> &children(NodeId i) const { return children_[i]; }
    const std::vector<NodeId> &topological_order() const { return topo_order_; }

    /// Throws ParseError for unknown names.
    NodeId index_of(const std::string &name) const;

    /// Row index of node i's CPT selected by assignment x.
    std::size_t parent_config(NodeId i, std::span<const int> x) const;

    /// Product of cardinalities, saturating at UINT64_MAX.
    std::uint64_t state_space_size() const;

    /// Mixed-radix code of a full assignment with node 0 most significant.
    std::uint64_t encode(std::span<const int> x) const;
    Assignment decode(std::uint64_t index) const;

   private:
    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<NodeId> topo_order_;
};

/// Evidence set E with observed states and ordered hypothesis set H.
struct Query {
    std::map<NodeId, int> evidence;
    std::vector<NodeId> hypotheses;

    bool is_evidence(NodeId i) const { return evidence.count(i) != 0; }

    /// E and H disjoint, ids and states in range, no duplicate hypotheses.
    void validate(const BayesNet &net) const;

    /// True iff x agrees with every evidence value.
    bool consistent(std::span<const int> x) const;
};

/// Kahn's algorithm with ties broken by ascending id. Throws CycleError.
std::vector<NodeId> topological_order(const std::vector<std::vector<NodeId>> &parents);
std::vector<NodeId> topological_order(const BayesNet &net);

/// pa(i) ∪ ch(i) ∪ pa(ch(i)) minus i, sorted ascending.
std::vector<NodeId> markov_blanket(const BayesNet &net, NodeId i);

/// Product of CPT entries over all nodes.
double joint_probability(const BayesNet &net, std::span<const int> x);

/// P(x_H | x_E) by full enumeration. W holds P(x_H, x_E), W_tot = P(x_E).
/// Throws TooLargeError above `cap` joint states and ZeroEvidenceError when
/// P(x_E) = 0.
PosteriorTable exact_posterior(const BayesNet &net, const Query &query,
                               std::uint64_t cap = kDefaultEnumerationCap);

/// Distribution of node i given the rest of x, using only the Markov blanket
/// factors P(x_i | pa(i)) * prod_{j in ch(i)} P(x_j | pa(j)). Throws
/// DegenerateError when every state has zero weight.
std::vector<double> conditional_given_blanket(const BayesNet &net, NodeId i, std::span<const int> x);

/// Same as conditional_given_blanket but returns false instead of throwing
/// and leaves `out` unnormalized-zero on degeneracy.
bool try_conditional_given_blanket(const BayesNet &net, NodeId i, std::span<const int> x,
                                   std::vector<double> &out);

}  // namespace qbnet

#endif
