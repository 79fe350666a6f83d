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

#include "qbnet/muxor.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qbnet/errors.h"

namespace qbnet {

namespace {

constexpr double kUnitaryTolerance = 1e-10;

int exact_log2(std::size_t n, const char *what) {
    if (n == 0 || !std::has_single_bit(n)) {
        throw ParseError(std::string(what) + " length " + std::to_string(n) + " is not a power of two");
    }
    return std::countr_zero(n);
}

}  // namespace

AngleTree chain_angles(std::span<const double> q) {
    const int n = exact_log2(q.size(), "distribution");
    double sum = 0;
    for (double v : q) {
        if (!(v >= 0) || !std::isfinite(v)) {
            throw ParseError("distribution has a negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ParseError("distribution sums to " + std::to_string(sum) + ", not 1");
    }
    AngleTree tree;
    tree.levels.resize(n);
    std::vector<double> mass(q.begin(), q.end());
    for (int level = n - 1; level >= 0; --level) {
        const std::size_t half = std::size_t{1} << level;
        std::vector<double> &angles = tree.levels[level];
        angles.resize(half);
        std::vector<double> lower(half);
        for (std::size_t v = 0; v < half; ++v) {
            const double m0 = mass[v];
            const double m1 = mass[v | half];
            angles[v] = (m0 + m1 > 0) ? std::atan2(std::sqrt(m1), std::sqrt(m0)) : 0.0;
            lower[v] = m0 + m1;
        }
        mass = std::move(lower);
    }
    return tree;
}

Circuit state_prepare_circuit(const AngleTree &tree, std::span<const int> qubits) {
    const int n = tree.n_bits();
    std::vector<int> map(qubits.begin(), qubits.end());
    if (map.empty()) {
        for (int k = 0; k < n; ++k) {
            map.push_back(k);
        }
    }
    if (static_cast<int>(map.size()) != n) {
        throw IndexError("state preparation over " + std::to_string(n) + " bits given " +
                         std::to_string(map.size()) + " qubits");
    }
    int width = 0;
    for (int q : map) {
        width = std::max(width, q + 1);
    }
    Circuit c(width);
    for (int level = 0; level < n; ++level) {
        if (tree.levels[level].size() != (std::size_t{1} << level)) {
            throw IndexError("angle tree level " + std::to_string(level) + " has the wrong size");
        }
        if (level == 0) {
            c.add(Gate::roty(map[0], tree.levels[0][0]));
        } else {
            c.add(Gate::mux_roty(map[level], std::vector<int>(map.begin(), map.begin() + level), tree.levels[level]));
        }
    }
    return c;
}

std::vector<double> gray_code_angles(std::span<const double> angles) {
    const int k = exact_log2(angles.size(), "multiplexor angle list");
    const std::size_t n = angles.size();
    std::vector<double> phi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t gray = i ^ (i >> 1);
        double acc = 0;
        for (std::size_t b = 0; b < n; ++b) {
            acc += (std::popcount(b & gray) % 2 == 0) ? angles[b] : -angles[b];
        }
        phi[i] = std::ldexp(acc, -k);
    }
    return phi;
}

Circuit decompose_multiplexor(const RyMultiplexor &m, int n_qubits) {
    const std::size_t k = m.controls.size();
    if (m.angles.size() != (std::size_t{1} << k)) {
        throw IndexError("multiplexor with " + std::to_string(k) + " controls needs " +
                         std::to_string(std::size_t{1} << k) + " angles");
    }
    if (n_qubits < 0) {
        n_qubits = m.target + 1;
        for (int q : m.controls) {
            n_qubits = std::max(n_qubits, q + 1);
        }
    }
    Circuit c(n_qubits);
    if (k == 0) {
        c.add(Gate::roty(m.target, m.angles[0]));
        return c;
    }
    const std::vector<double> phi = gray_code_angles(m.angles);
    const std::size_t steps = phi.size();
    for (std::size_t i = 0; i < steps; ++i) {
        c.add(Gate::roty(m.target, phi[i]));
        const std::size_t flip = (i + 1 < steps) ? static_cast<std::size_t>(std::countr_zero(i + 1)) : k - 1;
        c.add(Gate::cnot(m.target, m.controls[flip]));
    }
    return c;
}

Eigen::MatrixXcd CsdFactors::reconstruct() const {
    const Eigen::Index m = theta.size();
    Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    Eigen::MatrixXcd middle = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    left.topLeftCorner(m, m) = l0;
    left.bottomRightCorner(m, m) = l1;
    right.topLeftCorner(m, m) = r0;
    right.bottomRightCorner(m, m) = r1;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double c = std::cos(theta(j));
        const double s = std::sin(theta(j));
        middle(j, j) = c;
        middle(j, m + j) = s;
        middle(m + j, j) = -s;
        middle(m + j, m + j) = c;
    }
    return left * middle * right;
}

CsdFactors csd_split(const Eigen::MatrixXcd &u) {
    if (u.rows() != u.cols() || u.rows() % 2 != 0 || u.rows() == 0) {
        throw IndexError("cosine-sine split needs a square matrix of even, nonzero dimension");
    }
    const Eigen::Index n = u.rows();
    const double defect = (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= kUnitaryTolerance)) {
        throw NotUnitaryError("matrix is not unitary: max |U†U - I| = " + std::to_string(defect));
    }
    const Eigen::Index m = n / 2;
    const Eigen::MatrixXcd u00 = u.topLeftCorner(m, m);
    const Eigen::MatrixXcd u01 = u.topRightCorner(m, m);
    const Eigen::MatrixXcd u10 = u.bottomLeftCorner(m, m);
    const Eigen::MatrixXcd u11 = u.bottomRightCorner(m, m);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u00, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CsdFactors f;
    f.l0 = svd.matrixU();
    f.r0 = svd.matrixV().adjoint();
    const Eigen::VectorXd cosines = svd.singularValues().cwiseMin(1.0);

    // Columns of U10 R0† are orthogonal with norms sin θ; pivoted QR takes them
    // in decreasing norm.
    const Eigen::MatrixXcd x = u10 * f.r0.adjoint();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(x);
    const Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    const auto &perm = qr.colsPermutation().indices();
    Eigen::VectorXd sines(m);
    f.l1.resize(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index j = perm(k);
        const std::complex<double> diag = r(k, k);
        const double s = std::abs(diag);
        const std::complex<double> phase = s > 0 ? diag / s : std::complex<double>(1.0);
        sines(j) = s;
        f.l1.col(j) = -q.col(k) * phase;
    }
    f.theta.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        f.theta(j) = std::atan2(sines(j), cosines(j));
    }
    const Eigen::VectorXd c = f.theta.array().cos();
    const Eigen::VectorXd s = f.theta.array().sin();
    f.r1 = c.asDiagonal() * (f.l1.adjoint() * u11) + s.asDiagonal() * (f.l0.adjoint() * u01);
    return f;
}

}  // namespace qbnet
