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

#ifndef QBNET_MUXOR_H
#define QBNET_MUXOR_H

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbnet/circuit.h"

namespace qbnet {

/// Chain-rule rotation angles. Level k holds 2^k angles indexed by the value
/// of bits 0..k-1; the angle at level k rotates bit k.
struct AngleTree {
    std::vector<std::vector<double>> levels;

    int n_bits() const { return static_cast<int>(levels.size()); }
};

/// Angles preparing sum_b sqrt(q_b)|b>. q has length 2^n, is nonnegative and
/// sums to 1 within 1e-12. A level-k angle is atan2(sqrt(mass with bit k set),
/// sqrt(mass with bit k clear)) given the lower bits; zero marginals give 0.
/// Throws ParseError on invalid input.
AngleTree chain_angles(std::span<const double> q);

/// RotY on bit 0, then multiplexors with 1, 2, ... controls. Bit k of the
/// prepared value lives on qubits[k] (identity map when empty).
Circuit state_prepare_circuit(const AngleTree &tree, std::span<const int> qubits = {});

/// Multiplexed RotY: sum_b RotY(angles[b]) on target ⊗ P_b on controls,
/// with controls[0] the least significant bit of b.
struct RyMultiplexor {
    int target = 0;
    std::vector<int> controls;
    std::vector<double> angles;

    Gate gate() const { return Gate::mux_roty(target, controls, angles); }
};

/// Gray-code decomposition into 2^k RotY gates alternating with 2^k CNOTs
/// (k controls); a single RotY for k = 0. The register has n_qubits qubits,
/// or just enough for the indices used when n_qubits < 0.
Circuit decompose_multiplexor(const RyMultiplexor &m, int n_qubits = -1);

/// Walsh transform turning multiplexor angles into Gray-code step angles.
std::vector<double> gray_code_angles(std::span<const double> angles);

/// One level of the cosine-sine decomposition
///   U = (L0 ⊕ L1) [[C, S], [-S, C]] (R0 ⊕ R1),
/// with C = diag(cos θ), S = diag(sin θ), θ in [0, π/2] and cosines
/// nonincreasing.
struct CsdFactors {
    Eigen::MatrixXcd l0, l1, r0, r1;
    Eigen::VectorXd theta;

    Eigen::MatrixXcd reconstruct() const;
};

/// Throws NotUnitaryError if ‖U†U − I‖_max > 1e-10, IndexError for odd or
/// non-square input.
CsdFactors csd_split(const Eigen::MatrixXcd &u);

}  // namespace qbnet

#endif
