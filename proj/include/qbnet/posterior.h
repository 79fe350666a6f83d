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

#ifndef QBNET_POSTERIOR_H
#define QBNET_POSTERIOR_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qbnet/bayes_net.h"

namespace qbnet {

/// Accumulated weights W[(x)_H] and W_tot. Hypothesis tuples are indexed in
/// mixed radix with the first hypothesis node most significant.
class PosteriorTable {
   public:
    PosteriorTable() = default;
    PosteriorTable(const BayesNet &net, const std::vector<NodeId> &hypotheses);

    const std::vector<NodeId> &hypotheses() const { return hypotheses_; }
    const std::vector<int> &cardinalities() const { return cardinalities_; }
    const std::vector<double> &weights() const { return weights_; }
    double total_weight() const { return total_; }
    std::uint64_t samples() const { return samples_; }
    std::size_t size() const { return weights_.size(); }

    std::size_t tuple_index(std::span<const int> x) const;
    std::vector<int> tuple_values(std::size_t index) const;

    /// Comma-joined hypothesis states, e.g. "0,1".
    std::string key(std::size_t index) const;

    void add(std::size_t index, double weight);
    void add_assignment(std::span<const int> x, double weight) { add(tuple_index(x), weight); }

    /// Counts a sample discarded on an evidence mismatch.
    void add_rejected() {
        ++samples_;
        ++rejected_;
    }
    std::uint64_t rejected() const { return rejected_; }

    /// Sets raw weights; used by exact inference.
    void set(std::vector<double> weights, double total);

    /// W / W_tot. Throws AllRejectedError when W_tot is zero.
    std::vector<double> estimates() const;

    /// Associative addition of weights and counts. Hypothesis sets must match.
    void merge(const PosteriorTable &other);

   private:
    std::vector<NodeId> hypotheses_;
    std::vector<int> cardinalities_;
    std::vector<double> weights_{0.0};
    double total_ = 0;
    std::uint64_t samples_ = 0;
    std::uint64_t rejected_ = 0;
};

/// Largest absolute difference between two estimate vectors of equal size.
double max_abs_difference(std::span<const double> a, std::span<const double> b);

}  // namespace qbnet

#endif
