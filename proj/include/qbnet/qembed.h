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

#ifndef QBNET_QEMBED_H
#define QBNET_QEMBED_H

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbnet/bayes_net.h"
#include "qbnet/circuit.h"

namespace qbnet {

class MhProposal;

/// Qubits needed for `cardinality` states: ceil(log2), 0 for a single state.
int bits_for(int cardinality);

/// Named qubit groups of a compiled circuit.
using QubitMap = std::map<std::string, std::vector<int>>;

/// JSON object {"name": [qubits...]}.
std::string qubit_map_json(const QubitMap &map);

/// q-embedding of one probability matrix P(y | x).
///
/// Parent qubits come first: parent blocks are laid out with the last parent
/// in the lowest qubits, so the parent register reads the parent
/// configuration in binary (first parent most significant). Focus qubits
/// follow, bit k of y on qubit n_parent_bits + k. Applied to
/// |y = 0> ⊗ |x>, the circuit yields sum_y sqrt(P(y|x)) |y> ⊗ |x>.
struct QEmbedding {
    int n_parent_bits = 0;
    int n_focus_bits = 0;
    /// Bits per parent, in parent order.
    std::vector<int> parent_bits;
    std::vector<int> parent_cardinalities;
    int cardinality = 1;
    Circuit circuit;

    std::vector<int> parent_qubits() const;
    std::vector<int> focus_qubits() const;

    /// Basis value of the parent register for a parent configuration.
    std::uint64_t parent_basis(std::span<const int> parent_values) const;
    /// Same, from a CPT row index.
    std::uint64_t parent_basis_of_config(std::size_t config) const;

    /// Focus-only circuit left after fixing the parent register to
    /// `parent_basis`: every multiplexor keeps just the angles its parent
    /// bits select.
    Circuit reduce(std::uint64_t parent_basis) const;
};

/// One multiplexor per focus bit, controlled by the lower focus bits and
/// every parent bit. Padded parent values and focus states carry zero
/// probability. Throws InvalidCptError for an invalid table.
QEmbedding embed_cpt(const Cpt &cpt);

enum class QbRole {
    /// Ancilla initialised to |0>.
    Source,
    /// Carries the q-embedding of the CB node's CPT.
    Embedding,
    /// Hands the worldline value to one child's embedding.
    Marginalizer,
    /// Sink copy of the parent value passed along the worldline.
    ParentImage,
    /// Delta child given to a childless node.
    AddedChild,
};

struct QbNode {
    std::string label;
    QbRole role = QbRole::Source;
    /// CB node whose worldline this node lies on.
    NodeId worldline = 0;
    /// Position k on the worldline, printed as name<k>.
    int index = 1;
    /// Indices into QbNet::nodes.
    std::vector<std::size_t> parents;
    /// For Marginalizer nodes: the child fed.
    std::optional<NodeId> feeds;
};

/// q-embedding of a CB net: worldline chains of source, embedding,
/// marginalizer/parent-image pairs and (for childless nodes) an added child.
/// The last node of each worldline is its external leaf.
struct QbNet {
    std::vector<std::string> names;
    std::vector<int> cardinalities;
    std::vector<NodeId> order;
    std::vector<QbNode> nodes;
    /// Per CB node: its embedding, with parents in CPT order.
    std::vector<QEmbedding> embeddings;
    std::vector<std::vector<NodeId>> cb_parents;

    std::vector<std::size_t> leaves() const;
    /// Throws ParseError if a structural invariant fails.
    void validate() const;
};

QbNet embed_net(const BayesNet &net);

struct CompiledCircuit {
    Circuit circuit;
    QubitMap qubits;
    /// Per CB node, its register (bit k on entry k); empty for one-state nodes.
    std::vector<std::vector<int>> registers;
};

/// One register per worldline, gates in topological order. Throws
/// WidthError beyond the simulator cap.
CompiledCircuit qbnet_to_circuit(const QbNet &qb);

/// Resampling distribution of one node in one Gibbs slice, as a table over
/// its non-evidence conditioning nodes.
struct SliceKernel {
    NodeId target = 0;
    /// Evidence targets leave every value unchanged.
    bool identity = false;
    /// First listed is the most significant digit of a row index.
    std::vector<NodeId> conditioning;
    Cpt table;
};

/// Transition of one Gibbs (or MH) macro-step: beta sweeps over the nodes
/// in id order. Evidence values are folded into every kernel.
struct GibbsNet {
    std::vector<std::string> names;
    std::vector<int> cardinalities;
    std::map<NodeId, int> evidence;
    Assignment x_prev;
    int beta = 1;
    std::vector<SliceKernel> slices;

    std::size_t size() const { return cardinalities.size(); }
    std::uint64_t state_space_size() const;
    std::uint64_t encode(std::span<const int> x) const;
    Assignment decode(std::uint64_t index) const;

    /// Distribution of the state after all slices, starting from x_prev,
    /// indexed by encode(). Throws TooLargeError above `cap` states.
    std::vector<double> exact_transition(std::uint64_t cap = std::uint64_t{1} << 20) const;
};

/// Gibbs slices resample each non-evidence node from its blanket
/// conditional, conditioned on the non-evidence blanket only.
GibbsNet build_gibbs_net(const BayesNet &net, const Query &query, int beta, const Assignment &x_prev);

/// MH slices use the single-node MH transition, conditioned on the node's
/// own old value and its non-evidence blanket.
GibbsNet build_mh_net(const BayesNet &net, const Query &query, const MhProposal &proposal, int beta,
                      const Assignment &x_prev);

struct RecycleStep {
    /// Transition after which the register is free.
    std::size_t transition = 0;
    std::string register_name;
    /// True when the register is reset rather than uncomputed.
    bool reset = false;
};

struct GibbsCircuit {
    Circuit circuit;
    QubitMap qubits;
    /// Per node, its register in the final slice; empty for evidence and
    /// one-state nodes.
    std::vector<std::vector<int>> final_registers;
    /// Per node, its register in the first slice together with the b copy
    /// when present.
    std::vector<std::vector<int>> initial_registers;
    std::vector<RecycleStep> recycle_plan;

    /// Basis state holding x in the first slice.
    std::uint64_t initial_basis(std::span<const int> x) const;
    /// Final-slice qubits, concatenated in node order.
    std::vector<int> final_qubits() const;
    /// Full assignment from a measurement of final_qubits(); evidence values
    /// are filled in from `g`.
    Assignment decode_final(const GibbsNet &g, std::uint64_t outcome) const;
};

/// Two banks of registers used alternately by consecutive slices. Each bank
/// holds an a-register per non-evidence node and b-copies of every node
/// except the one resampled next. A transition multiplexes the new value
/// from the old bank's b-copies, copies the unchanged nodes across, clears
/// the copies it left behind and resets the superseded value. When
/// `prepare_initial` is false the X gates loading x_prev are omitted.
GibbsCircuit gibbs_net_circuit(const GibbsNet &g, bool prepare_initial = true);

}  // namespace qbnet

#endif
