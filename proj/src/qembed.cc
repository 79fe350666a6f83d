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

#include "qbnet/qembed.h"

#include <algorithm>
#include <bit>
#include <sstream>
#include <string>

#include "qbnet/classical_sampling.h"
#include "qbnet/errors.h"
#include "qbnet/muxor.h"
#include "qbnet/state_vector.h"

namespace qbnet {

namespace {

std::vector<int> qubit_range(int first, int count) {
    std::vector<int> q(count);
    for (int k = 0; k < count; ++k) {
        q[k] = first + k;
    }
    return q;
}

/// Parent values encoded in a parent-register basis value, or nullopt when a
/// block holds a padded value.
std::optional<std::vector<int>> parent_values_of_basis(const QEmbedding &e, std::uint64_t basis) {
    std::vector<int> values(e.parent_bits.size());
    int shift = 0;
    for (std::size_t p = e.parent_bits.size(); p-- > 0;) {
        const int bits = e.parent_bits[p];
        const auto v = static_cast<int>((basis >> shift) & ((std::uint64_t{1} << bits) - 1));
        if (v >= e.parent_cardinalities[p]) {
            return std::nullopt;
        }
        values[p] = v;
        shift += bits;
    }
    return values;
}

/// Register qubits for the parent blocks of an embedding, last parent lowest.
std::vector<int> parent_qubit_map(const QEmbedding &e, const std::vector<std::vector<int>> &parent_registers) {
    std::vector<int> map;
    for (std::size_t p = parent_registers.size(); p-- > 0;) {
        if (static_cast<int>(parent_registers[p].size()) != e.parent_bits[p]) {
            throw IndexError("parent register width does not match the embedding");
        }
        map.insert(map.end(), parent_registers[p].begin(), parent_registers[p].end());
    }
    return map;
}

void append_embedding(Circuit &c, const QEmbedding &e, const std::vector<std::vector<int>> &parent_registers,
                      const std::vector<int> &focus_register) {
    std::vector<int> map = parent_qubit_map(e, parent_registers);
    if (static_cast<int>(focus_register.size()) != e.n_focus_bits) {
        throw IndexError("focus register width does not match the embedding");
    }
    map.insert(map.end(), focus_register.begin(), focus_register.end());
    c.append(e.circuit, map);
}

std::string registered_name(const std::string &node, const char *suffix) { return node + "." + suffix; }

}  // namespace

int bits_for(int cardinality) {
    if (cardinality < 1) {
        throw InvalidCptError("cardinality must be at least 1");
    }
    return static_cast<int>(std::bit_width(static_cast<unsigned>(cardinality - 1)));
}

std::string qubit_map_json(const QubitMap &map) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto &[name, qubits] : map) {
        out << (first ? "" : ",") << '"' << name << "\":[";
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            out << (k ? "," : "") << qubits[k];
        }
        out << ']';
        first = false;
    }
    out << '}';
    return out.str();
}

std::vector<int> QEmbedding::parent_qubits() const { return qubit_range(0, n_parent_bits); }

std::vector<int> QEmbedding::focus_qubits() const { return qubit_range(n_parent_bits, n_focus_bits); }

std::uint64_t QEmbedding::parent_basis(std::span<const int> parent_values) const {
    if (parent_values.size() != parent_bits.size()) {
        throw IndexError("expected " + std::to_string(parent_bits.size()) + " parent values");
    }
    std::uint64_t basis = 0;
    int shift = 0;
    for (std::size_t p = parent_bits.size(); p-- > 0;) {
        if (parent_values[p] < 0 || parent_values[p] >= parent_cardinalities[p]) {
            throw IndexError("parent value out of range");
        }
        basis |= static_cast<std::uint64_t>(parent_values[p]) << shift;
        shift += parent_bits[p];
    }
    return basis;
}

std::uint64_t QEmbedding::parent_basis_of_config(std::size_t config) const {
    std::vector<int> values(parent_cardinalities.size());
    for (std::size_t p = parent_cardinalities.size(); p-- > 0;) {
        values[p] = static_cast<int>(config % parent_cardinalities[p]);
        config /= parent_cardinalities[p];
    }
    return parent_basis(values);
}

Circuit QEmbedding::reduce(std::uint64_t basis) const {
    Circuit out(n_focus_bits);
    for (const Gate &g : circuit.gates()) {
        if (g.target < n_parent_bits) {
            throw IndexError("embedding gate acts on a parent qubit");
        }
        std::vector<int> free_controls;
        std::vector<std::size_t> free_positions;
        std::uint64_t fixed = 0;
        for (std::size_t j = 0; j < g.controls.size(); ++j) {
            const int q = g.controls[j].qubit;
            if (q < n_parent_bits) {
                fixed |= ((basis >> q) & 1U) << j;
            } else {
                free_controls.push_back(q - n_parent_bits);
                free_positions.push_back(j);
            }
        }
        const int target = g.target - n_parent_bits;
        if (g.kind == GateKind::RotY) {
            out.add(Gate::roty(target, g.angles[0]));
            continue;
        }
        if (g.kind != GateKind::MuxRotY) {
            throw IndexError("embedding circuits hold only rotations");
        }
        std::vector<double> angles(std::size_t{1} << free_controls.size());
        for (std::uint64_t low = 0; low < angles.size(); ++low) {
            std::uint64_t index = fixed;
            for (std::size_t j = 0; j < free_positions.size(); ++j) {
                index |= ((low >> j) & 1U) << free_positions[j];
            }
            angles[low] = g.angles[index];
        }
        if (free_controls.empty()) {
            out.add(Gate::roty(target, angles[0]));
        } else {
            out.add(Gate::mux_roty(target, free_controls, std::move(angles)));
        }
    }
    return out;
}

QEmbedding embed_cpt(const Cpt &cpt) {
    cpt.validate();
    QEmbedding e;
    e.cardinality = cpt.cardinality();
    e.parent_cardinalities = cpt.parent_cardinalities();
    for (int card : e.parent_cardinalities) {
        e.parent_bits.push_back(bits_for(card));
        e.n_parent_bits += e.parent_bits.back();
    }
    e.n_focus_bits = bits_for(e.cardinality);
    e.circuit = Circuit(e.n_parent_bits + e.n_focus_bits);
    if (e.n_parent_bits + e.n_focus_bits > 62) {
        throw WidthError("embedding needs more than 62 qubits");
    }

    const std::uint64_t n_parent_states = std::uint64_t{1} << e.n_parent_bits;
    const std::size_t focus_dim = std::size_t{1} << e.n_focus_bits;
    std::vector<AngleTree> trees;
    trees.reserve(n_parent_states);
    std::vector<double> q(focus_dim);
    for (std::uint64_t basis = 0; basis < n_parent_states; ++basis) {
        std::fill(q.begin(), q.end(), 0.0);
        const auto values = parent_values_of_basis(e, basis);
        if (values) {
            const auto row = cpt.row(cpt.config_index(*values));
            std::copy(row.begin(), row.end(), q.begin());
        } else {
            q[0] = 1.0;
        }
        trees.push_back(chain_angles(q));
    }

    const std::vector<int> parents = e.parent_qubits();
    for (int level = 0; level < e.n_focus_bits; ++level) {
        const int target = e.n_parent_bits + level;
        std::vector<int> controls = qubit_range(e.n_parent_bits, level);
        controls.insert(controls.end(), parents.begin(), parents.end());
        std::vector<double> angles(std::size_t{1} << controls.size());
        for (std::uint64_t basis = 0; basis < n_parent_states; ++basis) {
            for (std::size_t low = 0; low < (std::size_t{1} << level); ++low) {
                angles[low + (basis << level)] = trees[basis].levels[level][low];
            }
        }
        if (controls.empty()) {
            e.circuit.add(Gate::roty(target, angles[0]));
        } else {
            e.circuit.add(Gate::mux_roty(target, controls, std::move(angles)));
        }
    }
    return e;
}

std::vector<std::size_t> QbNet::leaves() const {
    std::vector<bool> has_child(nodes.size(), false);
    for (const QbNode &n : nodes) {
        for (std::size_t p : n.parents) {
            has_child[p] = true;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!has_child[k]) {
            out.push_back(k);
        }
    }
    return out;
}

void QbNet::validate() const {
    const std::size_t n = names.size();
    if (embeddings.size() != n || cardinalities.size() != n || cb_parents.size() != n) {
        throw ParseError("q-embedded net has inconsistent per-node tables");
    }
    std::vector<int> sources(n, 0);
    std::vector<int> embeds(n, 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const QbNode &node = nodes[k];
        for (std::size_t p : node.parents) {
            if (p >= k) {
                throw ParseError("q-embedded net node '" + node.label + "' precedes a parent");
            }
        }
        switch (node.role) {
            case QbRole::Source:
                ++sources[node.worldline];
                if (!node.parents.empty()) {
                    throw ParseError("source ancilla '" + node.label + "' has parents");
                }
                break;
            case QbRole::Embedding:
                ++embeds[node.worldline];
                if (node.parents.size() != 1 + cb_parents[node.worldline].size() ||
                    nodes[node.parents[0]].role != QbRole::Source) {
                    throw ParseError("embedding node '" + node.label + "' is not fed by its source ancilla");
                }
                break;
            default:
                if (node.parents.size() != 1) {
                    throw ParseError("node '" + node.label + "' must have one parent");
                }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (sources[i] != 1 || embeds[i] != 1) {
            throw ParseError("node '" + names[i] + "' lacks a unique source and embedding");
        }
    }
    if (leaves().size() != n) {
        throw ParseError("q-embedded net must end each worldline in one leaf");
    }
}

QbNet embed_net(const BayesNet &net) {
    QbNet qb;
    const std::size_t n = net.size();
    for (const Node &node : net.nodes()) {
        qb.names.push_back(node.name);
        qb.cardinalities.push_back(node.cardinality);
        qb.cb_parents.push_back(node.parents);
        qb.embeddings.push_back(embed_cpt(node.cpt));
    }
    qb.order = net.topological_order();
    // marginalizer[p][c]: node handing p's value to child c.
    std::vector<std::map<NodeId, std::size_t>> marginalizer(n);
    auto add = [&qb](QbNode node) {
        qb.nodes.push_back(std::move(node));
        return qb.nodes.size() - 1;
    };
    for (NodeId i : qb.order) {
        const std::string &name = qb.names[i];
        const std::size_t source = add({name + "<1>", QbRole::Source, i, 1, {}, std::nullopt});
        std::vector<std::size_t> parents{source};
        for (NodeId p : net.parents(i)) {
            parents.push_back(marginalizer[p].at(i));
        }
        std::size_t last = add({name + "<2>", QbRole::Embedding, i, 2, parents, std::nullopt});
        int index = 2;
        for (NodeId c : net.children(i)) {
            marginalizer[i][c] =
                add({name + "<" + std::to_string(index) + ">:" + qb.names[c], QbRole::Marginalizer, i, index, {last}, c});
            ++index;
            last = add({name + "<" + std::to_string(index) + ">", QbRole::ParentImage, i, index, {last}, std::nullopt});
        }
        if (net.children(i).empty()) {
            add({name + "<3>", QbRole::AddedChild, i, 3, {last}, std::nullopt});
        }
    }
    qb.validate();
    return qb;
}

CompiledCircuit qbnet_to_circuit(const QbNet &qb) {
    qb.validate();
    CompiledCircuit out;
    int width = 0;
    for (std::size_t i = 0; i < qb.names.size(); ++i) {
        const int bits = bits_for(qb.cardinalities[i]);
        out.registers.push_back(qubit_range(width, bits));
        out.qubits[qb.names[i]] = out.registers.back();
        width += bits;
    }
    check_width(width);
    out.circuit = Circuit(width);
    for (const QbNode &node : qb.nodes) {
        if (node.role != QbRole::Embedding) {
            continue;
        }
        const NodeId i = node.worldline;
        std::vector<std::vector<int>> parent_registers;
        for (NodeId p : qb.cb_parents[i]) {
            parent_registers.push_back(out.registers[p]);
        }
        append_embedding(out.circuit, qb.embeddings[i], parent_registers, out.registers[i]);
    }
    return out;
}

std::uint64_t GibbsNet::state_space_size() const {
    std::uint64_t n = 1;
    for (int c : cardinalities) {
        n *= static_cast<std::uint64_t>(c);
    }
    return n;
}

std::uint64_t GibbsNet::encode(std::span<const int> x) const {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < cardinalities.size(); ++i) {
        index = index * cardinalities[i] + static_cast<std::uint64_t>(x[i]);
    }
    return index;
}

Assignment GibbsNet::decode(std::uint64_t index) const {
    Assignment x(cardinalities.size());
    for (std::size_t i = cardinalities.size(); i-- > 0;) {
        x[i] = static_cast<int>(index % cardinalities[i]);
        index /= cardinalities[i];
    }
    return x;
}

std::vector<double> GibbsNet::exact_transition(std::uint64_t cap) const {
    const std::uint64_t n = state_space_size();
    if (n > cap) {
        throw TooLargeError("Gibbs transition over " + std::to_string(n) + " states exceeds the cap of " +
                            std::to_string(cap));
    }
    std::vector<double> p(n, 0.0);
    p[encode(x_prev)] = 1.0;
    std::vector<int> values;
    for (const SliceKernel &k : slices) {
        if (k.identity) {
            continue;
        }
        std::vector<double> next(n, 0.0);
        for (std::uint64_t s = 0; s < n; ++s) {
            if (p[s] == 0) {
                continue;
            }
            Assignment x = decode(s);
            values.clear();
            for (NodeId c : k.conditioning) {
                values.push_back(x[c]);
            }
            const auto row = k.table.row(k.table.config_index(values));
            for (int v = 0; v < cardinalities[k.target]; ++v) {
                x[k.target] = v;
                next[encode(x)] += p[s] * row[v];
            }
        }
        p = std::move(next);
    }
    return p;
}

namespace {

template <class RowOf>
GibbsNet build_slices(const BayesNet &net, const Query &query, int beta, const Assignment &x_prev,
                      bool condition_on_target, RowOf row_of) {
    query.validate(net);
    if (beta < 1) {
        throw ParseError("beta must be at least 1");
    }
    if (x_prev.size() != net.size()) {
        throw ParseError("state has " + std::to_string(x_prev.size()) + " values, expected " +
                         std::to_string(net.size()));
    }
    for (NodeId i = 0; i < net.size(); ++i) {
        if (x_prev[i] < 0 || x_prev[i] >= net.cardinality(i)) {
            throw ParseError("state of node '" + net.node(i).name + "' is out of range");
        }
    }
    if (!query.consistent(x_prev)) {
        throw ParseError("state disagrees with the evidence");
    }
    GibbsNet g;
    for (const Node &node : net.nodes()) {
        g.names.push_back(node.name);
        g.cardinalities.push_back(node.cardinality);
    }
    g.evidence = query.evidence;
    g.x_prev = x_prev;
    g.beta = beta;

    std::vector<SliceKernel> sweep;
    for (NodeId i = 0; i < net.size(); ++i) {
        SliceKernel k;
        k.target = i;
        if (query.is_evidence(i)) {
            k.identity = true;
            std::vector<double> entries(net.cardinality(i), 0.0);
            entries[query.evidence.at(i)] = 1.0;
            k.table = Cpt(net.cardinality(i), {}, entries);
            sweep.push_back(std::move(k));
            continue;
        }
        if (condition_on_target) {
            k.conditioning.push_back(i);
        }
        for (NodeId m : markov_blanket(net, i)) {
            if (!query.is_evidence(m)) {
                k.conditioning.push_back(m);
            }
        }
        std::vector<int> cards;
        for (NodeId c : k.conditioning) {
            cards.push_back(net.cardinality(c));
        }
        std::size_t configs = 1;
        for (int c : cards) {
            configs *= static_cast<std::size_t>(c);
        }
        std::vector<double> entries;
        entries.reserve(configs * net.cardinality(i));
        Assignment x = x_prev;
        for (std::size_t config = 0; config < configs; ++config) {
            std::size_t rest = config;
            for (std::size_t j = k.conditioning.size(); j-- > 0;) {
                x[k.conditioning[j]] = static_cast<int>(rest % cards[j]);
                rest /= cards[j];
            }
            const std::vector<double> row = row_of(i, x);
            entries.insert(entries.end(), row.begin(), row.end());
        }
        k.table = Cpt(net.cardinality(i), cards, std::move(entries));
        k.table.validate();
        sweep.push_back(std::move(k));
    }
    for (int b = 0; b < beta; ++b) {
        g.slices.insert(g.slices.end(), sweep.begin(), sweep.end());
    }
    return g;
}

}  // namespace

GibbsNet build_gibbs_net(const BayesNet &net, const Query &query, int beta, const Assignment &x_prev) {
    return build_slices(net, query, beta, x_prev, false,
                        [&net](NodeId i, const Assignment &x) { return gibbs_kernel_row(net, i, x); });
}

GibbsNet build_mh_net(const BayesNet &net, const Query &query, const MhProposal &proposal, int beta,
                      const Assignment &x_prev) {
    proposal.validate(net);
    return build_slices(net, query, beta, x_prev, true, [&](NodeId i, const Assignment &x) {
        return mh_kernel_row(net, proposal, i, x);
    });
}

std::uint64_t GibbsCircuit::initial_basis(std::span<const int> x) const {
    std::uint64_t basis = 0;
    for (std::size_t m = 0; m < initial_registers.size(); ++m) {
        const auto &reg = initial_registers[m];
        if (reg.empty()) {
            continue;
        }
        const std::size_t bits = final_registers[m].size();
        for (std::size_t j = 0; j < reg.size(); ++j) {
            if ((x[m] >> (j % bits)) & 1) {
                basis |= std::uint64_t{1} << reg[j];
            }
        }
    }
    return basis;
}

std::vector<int> GibbsCircuit::final_qubits() const {
    std::vector<int> q;
    for (const auto &reg : final_registers) {
        q.insert(q.end(), reg.begin(), reg.end());
    }
    return q;
}

Assignment GibbsCircuit::decode_final(const GibbsNet &g, std::uint64_t outcome) const {
    Assignment x(g.size(), 0);
    int shift = 0;
    for (NodeId m = 0; m < g.size(); ++m) {
        const auto bits = static_cast<int>(final_registers[m].size());
        const auto hit = g.evidence.find(m);
        if (hit != g.evidence.end()) {
            x[m] = hit->second;
            continue;
        }
        x[m] = static_cast<int>((outcome >> shift) & ((std::uint64_t{1} << bits) - 1));
        shift += bits;
        if (x[m] >= g.cardinalities[m]) {
            throw NumericError("measured a padded state of node '" + g.names[m] + "'");
        }
    }
    return x;
}

GibbsCircuit gibbs_net_circuit(const GibbsNet &g, bool prepare_initial) {
    const std::size_t n = g.size();
    std::vector<int> bits(n, 0);
    int total_bits = 0;
    for (NodeId m = 0; m < n; ++m) {
        if (!g.evidence.count(m)) {
            bits[m] = bits_for(g.cardinalities[m]);
            total_bits += bits[m];
        }
    }
    std::vector<const SliceKernel *> moves;
    for (const SliceKernel &k : g.slices) {
        if (!k.identity) {
            moves.push_back(&k);
        }
    }
    const std::size_t n_moves = moves.size();

    // Bank b serves slices s with s % 2 == b; its b-pool holds copies of every
    // node except the one resampled next.
    int pool[2] = {0, 0};
    for (std::size_t s = 0; s < n_moves; ++s) {
        pool[s % 2] = std::max(pool[s % 2], total_bits - bits[moves[s]->target]);
    }
    const int banks = n_moves > 0 ? 2 : 1;
    int bank_start[2] = {0, total_bits + pool[0]};
    const int width = bank_start[0] + (total_bits + pool[0]) + (banks == 2 ? total_bits + pool[1] : 0);
    check_width(width);

    GibbsCircuit out;
    out.circuit = Circuit(width);
    std::vector<std::vector<int>> a_reg[2];
    for (int b = 0; b < banks; ++b) {
        int q = bank_start[b];
        a_reg[b].resize(n);
        for (NodeId m = 0; m < n; ++m) {
            a_reg[b][m] = qubit_range(q, bits[m]);
            q += bits[m];
            if (bits[m] > 0) {
                out.qubits[registered_name(g.names[m], b == 0 ? "a0" : "a1")] = a_reg[b][m];
            }
        }
        if (pool[b] > 0) {
            out.qubits[b == 0 ? "pool.b0" : "pool.b1"] = qubit_range(q, pool[b]);
        }
    }
    auto b_reg = [&](std::size_t s, NodeId m) {
        const int bank = static_cast<int>(s % 2);
        int q = bank_start[bank] + total_bits;
        for (NodeId k = 0; k < m; ++k) {
            if (k != moves[s]->target) {
                q += bits[k];
            }
        }
        return qubit_range(q, bits[m]);
    };
    auto copy = [&](const std::vector<int> &from, const std::vector<int> &to) {
        for (std::size_t j = 0; j < from.size(); ++j) {
            out.circuit.add(Gate::cnot(to[j], from[j]));
        }
    };

    out.initial_registers.resize(n);
    for (NodeId m = 0; m < n; ++m) {
        out.initial_registers[m] = a_reg[0][m];
        if (n_moves > 0 && m != moves[0]->target && bits[m] > 0) {
            const auto b = b_reg(0, m);
            out.initial_registers[m].insert(out.initial_registers[m].end(), b.begin(), b.end());
        }
        if (prepare_initial && bits[m] > 0) {
            for (std::size_t j = 0; j < out.initial_registers[m].size(); ++j) {
                if ((g.x_prev[m] >> (j % bits[m])) & 1) {
                    out.circuit.add(Gate::pauli_x(out.initial_registers[m][j]));
                }
            }
        }
    }

    for (std::size_t s = 0; s < n_moves; ++s) {
        const int old_bank = static_cast<int>(s % 2);
        const int new_bank = 1 - old_bank;
        const SliceKernel &kernel = *moves[s];
        const NodeId r = kernel.target;
        const bool last = s + 1 == n_moves;
        const NodeId next = last ? n : moves[s + 1]->target;

        std::vector<std::vector<int>> controls;
        for (NodeId c : kernel.conditioning) {
            controls.push_back(c == r ? a_reg[old_bank][r] : b_reg(s, c));
        }
        append_embedding(out.circuit, embed_cpt(kernel.table), controls, a_reg[new_bank][r]);
        if (!last && next != r) {
            copy(a_reg[new_bank][r], b_reg(s + 1, r));
        }
        for (NodeId m = 0; m < n; ++m) {
            if (m == r || bits[m] == 0) {
                continue;
            }
            copy(a_reg[old_bank][m], a_reg[new_bank][m]);
            if (!last && next != m) {
                copy(a_reg[old_bank][m], b_reg(s + 1, m));
            }
        }
        if (s + 2 > n_moves) {
            continue;
        }
        for (NodeId m = 0; m < n; ++m) {
            if (m == r || bits[m] == 0) {
                continue;
            }
            copy(a_reg[new_bank][m], a_reg[old_bank][m]);
            copy(a_reg[new_bank][m], b_reg(s, m));
            out.recycle_plan.push_back({s, registered_name(g.names[m], old_bank == 0 ? "a0" : "a1"), false});
            out.recycle_plan.push_back({s, registered_name(g.names[m], old_bank == 0 ? "b0" : "b1"), false});
        }
        for (int q : a_reg[old_bank][r]) {
            out.circuit.add(Gate::reset(q));
        }
        if (bits[r] > 0) {
            out.recycle_plan.push_back({s, registered_name(g.names[r], old_bank == 0 ? "a0" : "a1"), true});
        }
    }
    out.final_registers = a_reg[n_moves % 2];
    return out;
}

}  // namespace qbnet
