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

#include "qbnet/bayes_net.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "qbnet/errors.h"
#include "qbnet/posterior.h"

namespace qbnet {

Cpt::Cpt(int cardinality, std::vector<int> parent_cardinalities, std::vector<double> entries)
    : cardinality_(cardinality),
      parent_cardinalities_(std::move(parent_cardinalities)),
      entries_(std::move(entries)) {
    num_configs_ = 1;
    for (int c : parent_cardinalities_) {
        if (c < 1) {
            throw InvalidCptError("parent cardinality must be >= 1");
        }
        num_configs_ *= static_cast<std::size_t>(c);
    }
    if (cardinality_ < 1) {
        throw InvalidCptError("node cardinality must be >= 1");
    }
    if (entries_.size() != num_configs_ * static_cast<std::size_t>(cardinality_)) {
        std::ostringstream ss;
        ss << "cpt has " << entries_.size() << " entries, expected "
           << num_configs_ * static_cast<std::size_t>(cardinality_);
        throw InvalidCptError(ss.str());
    }
}

std::span<const double> Cpt::row(std::size_t config) const {
    return std::span<const double>(entries_).subspan(config * cardinality_, cardinality_);
}

std::size_t Cpt::config_index(std::span<const int> parent_values) const {
    std::size_t index = 0;
    for (std::size_t j = 0; j < parent_cardinalities_.size(); ++j) {
        index = index * parent_cardinalities_[j] + static_cast<std::size_t>(parent_values[j]);
    }
    return index;
}

std::vector<int> Cpt::config_values(std::size_t config) const {
    std::vector<int> values(parent_cardinalities_.size());
    for (std::size_t j = parent_cardinalities_.size(); j-- > 0;) {
        values[j] = static_cast<int>(config % parent_cardinalities_[j]);
        config /= parent_cardinalities_[j];
    }
    return values;
}

void Cpt::validate() const {
    for (std::size_t c = 0; c < num_configs_; ++c) {
        double sum = 0;
        for (double p : row(c)) {
            if (!(p >= 0) || !std::isfinite(p)) {
                std::ostringstream ss;
                ss << "cpt row " << c << " has a negative or non-finite entry";
                throw InvalidCptError(ss.str());
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            std::ostringstream ss;
            ss.precision(17);
            ss << "cpt row " << c << " sums to " << sum << ", expected 1";
            throw InvalidCptError(ss.str());
        }
    }
}

Cpt Cpt::deterministic(int cardinality, std::vector<int> parent_cardinalities,
                       const std::vector<int> &state_per_config) {
    std::size_t configs = 1;
    for (int c : parent_cardinalities) {
        configs *= static_cast<std::size_t>(c);
    }
    if (state_per_config.size() != configs) {
        throw InvalidCptError("deterministic cpt: one state per configuration required");
    }
    std::vector<double> entries(configs * cardinality, 0.0);
    for (std::size_t c = 0; c < configs; ++c) {
        entries[c * cardinality + state_per_config[c]] = 1.0;
    }
    return Cpt(cardinality, std::move(parent_cardinalities), std::move(entries));
}

std::vector<NodeId> topological_order(const std::vector<std::vector<NodeId>> &parents) {
    const std::size_t n = parents.size();
    std::vector<std::size_t> pending(n);
    std::vector<std::vector<NodeId>> children(n);
    for (NodeId i = 0; i < n; ++i) {
        pending[i] = parents[i].size();
        for (NodeId p : parents[i]) {
            children[p].push_back(i);
        }
    }
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId i = 0; i < n; ++i) {
        if (pending[i] == 0) {
            ready.push(i);
        }
    }
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        NodeId i = ready.top();
        ready.pop();
        order.push_back(i);
        for (NodeId c : children[i]) {
            if (--pending[c] == 0) {
                ready.push(c);
            }
        }
    }
    if (order.size() != n) {
        throw CycleError("parent relation contains a cycle");
    }
    return order;
}

std::vector<NodeId> topological_order(const BayesNet &net) {
    return net.topological_order();
}

BayesNet::BayesNet(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) {
        throw ParseError("net must contain at least one node");
    }
    const std::size_t n = nodes_.size();
    std::set<std::string> names;
    children_.assign(n, {});
    std::vector<std::vector<NodeId>> parents(n);
    for (NodeId i = 0; i < n; ++i) {
        const Node &node = nodes_[i];
        if (!names.insert(node.name).second) {
            throw ParseError("node '" + node.name + "': duplicate name");
        }
        if (node.cardinality < 1) {
            throw InvalidCptError("node '" + node.name + "': cardinality must be >= 1");
        }
        std::set<NodeId> seen;
        for (NodeId p : node.parents) {
            if (p >= n) {
                throw ParseError("node '" + node.name + "': parent id out of range");
            }
            if (p == i) {
                throw CycleError("node '" + node.name + "': node is its own parent");
            }
            if (!seen.insert(p).second) {
                throw ParseError("node '" + node.name + "': duplicate parent");
            }
            children_[p].push_back(i);
        }
        parents[i] = node.parents;
        if (node.cpt.cardinality() != node.cardinality) {
            throw InvalidCptError("node '" + node.name + "': cpt cardinality mismatch");
        }
        const auto &pc = node.cpt.parent_cardinalities();
        if (pc.size() != node.parents.size()) {
            throw InvalidCptError("node '" + node.name + "': cpt parent count mismatch");
        }
        for (std::size_t j = 0; j < pc.size(); ++j) {
            if (pc[j] != nodes_[node.parents[j]].cardinality) {
                throw InvalidCptError("node '" + node.name + "': cpt parent cardinality mismatch for parent '" +
                                      nodes_[node.parents[j]].name + "'");
            }
        }
        try {
            node.cpt.validate();
        } catch (const InvalidCptError &e) {
            throw InvalidCptError("node '" + node.name + "': " + e.what());
        }
    }
    try {
        topo_order_ = qbnet::topological_order(parents);
    } catch (const CycleError &) {
        // Name a node that sits on a cycle: one never released by Kahn's pass.
        std::vector<bool> placed(n, false);
        std::vector<std::size_t> pending(n);
        std::vector<NodeId> stack;
        for (NodeId i = 0; i < n; ++i) {
            pending[i] = parents[i].size();
            if (pending[i] == 0) {
                stack.push_back(i);
            }
        }
        while (!stack.empty()) {
            NodeId i = stack.back();
            stack.pop_back();
            placed[i] = true;
            for (NodeId c : children_[i]) {
                if (--pending[c] == 0) {
                    stack.push_back(c);
                }
            }
        }
        for (NodeId i = 0; i < n; ++i) {
            if (!placed[i]) {
                throw CycleError("node '" + nodes_[i].name + "': parent relation contains a cycle");
            }
        }
        throw;
    }
}

NodeId BayesNet::index_of(const std::string &name) const {
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name == name) {
            return i;
        }
    }
    throw ParseError("unknown node '" + name + "'");
}

std::size_t BayesNet::parent_config(NodeId i, std::span<const int> x) const {
    const Node &node = nodes_[i];
    std::size_t index = 0;
    for (NodeId p : node.parents) {
        index = index * nodes_[p].cardinality + static_cast<std::size_t>(x[p]);
    }
    return index;
}

std::uint64_t BayesNet::state_space_size() const {
    std::uint64_t total = 1;
    for (const Node &node : nodes_) {
        auto c = static_cast<std::uint64_t>(node.cardinality);
        if (total > std::numeric_limits<std::uint64_t>::max() / c) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total *= c;
    }
    return total;
}

std::uint64_t BayesNet::encode(std::span<const int> x) const {
    std::uint64_t index = 0;
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        index = index * nodes_[i].cardinality + static_cast<std::uint64_t>(x[i]);
    }
    return index;
}

Assignment BayesNet::decode(std::uint64_t index) const {
    Assignment x(nodes_.size());
    for (NodeId i = nodes_.size(); i-- > 0;) {
        x[i] = static_cast<int>(index % nodes_[i].cardinality);
        index /= nodes_[i].cardinality;
    }
    return x;
}

void Query::validate(const BayesNet &net) const {
    for (const auto &[id, state] : evidence) {
        if (id >= net.size()) {
            throw ParseError("evidence node id out of range");
        }
        if (state < 0 || state >= net.cardinality(id)) {
            throw ParseError("evidence for '" + net.node(id).name + "' out of range");
        }
    }
    std::set<NodeId> seen;
    for (NodeId h : hypotheses) {
        if (h >= net.size()) {
            throw ParseError("hypothesis node id out of range");
        }
        if (!seen.insert(h).second) {
            throw ParseError("hypothesis '" + net.node(h).name + "' listed twice");
        }
        if (is_evidence(h)) {
            throw ParseError("node '" + net.node(h).name + "' is both evidence and hypothesis");
        }
    }
}

bool Query::consistent(std::span<const int> x) const {
    for (const auto &[id, state] : evidence) {
        if (x[id] != state) {
            return false;
        }
    }
    return true;
}

std::vector<NodeId> markov_blanket(const BayesNet &net, NodeId i) {
    if (i >= net.size()) {
        throw IndexError("markov_blanket: node id out of range");
    }
    std::set<NodeId> blanket(net.parents(i).begin(), net.parents(i).end());
    for (NodeId c : net.children(i)) {
        blanket.insert(c);
        blanket.insert(net.parents(c).begin(), net.parents(c).end());
    }
    blanket.erase(i);
    return {blanket.begin(), blanket.end()};
}

double joint_probability(const BayesNet &net, std::span<const int> x) {
    double p = 1.0;
    for (NodeId i : net.topological_order()) {
        p *= net.node(i).cpt.prob(x[i], net.parent_config(i, x));
        if (p == 0) {
            return 0;
        }
    }
    return p;
}

PosteriorTable exact_posterior(const BayesNet &net, const Query &query, std::uint64_t cap) {
    query.validate(net);
    // Only the non-evidence nodes are enumerated.
    std::vector<NodeId> free_nodes;
    std::uint64_t states = 1;
    for (NodeId i = 0; i < net.size(); ++i) {
        if (!query.is_evidence(i)) {
            free_nodes.push_back(i);
            states *= static_cast<std::uint64_t>(net.cardinality(i));
            if (states > cap) {
                throw TooLargeError("exact_posterior: state space exceeds enumeration cap");
            }
        }
    }
    PosteriorTable table(net, query.hypotheses);
    std::vector<double> weights(table.size(), 0.0);
    Assignment x(net.size(), 0);
    for (const auto &[id, state] : query.evidence) {
        x[id] = state;
    }
    double total = 0;
    for (std::uint64_t s = 0; s < states; ++s) {
        const double p = joint_probability(net, x);
        if (p > 0) {
            weights[table.tuple_index(x)] += p;
            total += p;
        }
        // Odometer over the free nodes, last node fastest.
        for (std::size_t k = free_nodes.size(); k-- > 0;) {
            NodeId i = free_nodes[k];
            if (++x[i] < net.cardinality(i)) {
                break;
            }
            x[i] = 0;
        }
    }
    if (total <= 0) {
        throw ZeroEvidenceError("exact_posterior: evidence has probability zero");
    }
    table.set(std::move(weights), total);
    return table;
}

bool try_conditional_given_blanket(const BayesNet &net, NodeId i, std::span<const int> x,
                                   std::vector<double> &out) {
    const int card = net.cardinality(i);
    out.assign(card, 0.0);
    Assignment y(x.begin(), x.end());
    const std::size_t config = net.parent_config(i, x);
    double sum = 0;
    for (int s = 0; s < card; ++s) {
        y[i] = s;
        double w = net.node(i).cpt.prob(s, config);
        for (NodeId c : net.children(i)) {
            if (w == 0) {
                break;
            }
            w *= net.node(c).cpt.prob(y[c], net.parent_config(c, y));
        }
        out[s] = w;
        sum += w;
    }
    if (!(sum > 0)) {
        return false;
    }
    for (double &w : out) {
        w /= sum;
    }
    return true;
}

std::vector<double> conditional_given_blanket(const BayesNet &net, NodeId i, std::span<const int> x) {
    if (i >= net.size()) {
        throw IndexError("conditional_given_blanket: node id out of range");
    }
    std::vector<double> out;
    if (!try_conditional_given_blanket(net, i, x, out)) {
        throw DegenerateError("conditional of node '" + net.node(i).name + "' given its blanket is identically zero");
    }
    return out;
}

}  // namespace qbnet
