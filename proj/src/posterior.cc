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

#include "qbnet/posterior.h"

#include <algorithm>
#include <cmath>

#include "qbnet/errors.h"

namespace qbnet {

PosteriorTable::PosteriorTable(const BayesNet &net, const std::vector<NodeId> &hypotheses)
    : hypotheses_(hypotheses) {
    std::size_t size = 1;
    for (NodeId h : hypotheses_) {
        cardinalities_.push_back(net.cardinality(h));
        size *= static_cast<std::size_t>(net.cardinality(h));
    }
    weights_.assign(size, 0.0);
}

std::size_t PosteriorTable::tuple_index(std::span<const int> x) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < hypotheses_.size(); ++k) {
        index = index * cardinalities_[k] + static_cast<std::size_t>(x[hypotheses_[k]]);
    }
    return index;
}

std::vector<int> PosteriorTable::tuple_values(std::size_t index) const {
    std::vector<int> values(hypotheses_.size());
    for (std::size_t k = hypotheses_.size(); k-- > 0;) {
        values[k] = static_cast<int>(index % cardinalities_[k]);
        index /= cardinalities_[k];
    }
    return values;
}

std::string PosteriorTable::key(std::size_t index) const {
    std::string out;
    const auto values = tuple_values(index);
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) {
            out += ',';
        }
        out += std::to_string(values[k]);
    }
    return out;
}

void PosteriorTable::add(std::size_t index, double weight) {
    weights_[index] += weight;
    total_ += weight;
    ++samples_;
}

void PosteriorTable::set(std::vector<double> weights, double total) {
    weights_ = std::move(weights);
    total_ = total;
}

std::vector<double> PosteriorTable::estimates() const {
    if (!(total_ > 0)) {
        throw AllRejectedError("posterior has zero total weight");
    }
    std::vector<double> out(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        out[k] = weights_[k] / total_;
    }
    return out;
}

void PosteriorTable::merge(const PosteriorTable &other) {
    if (other.hypotheses_ != hypotheses_) {
        throw Error("cannot merge posterior tables over different hypotheses");
    }
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        weights_[k] += other.weights_[k];
    }
    total_ += other.total_;
    samples_ += other.samples_;
    rejected_ += other.rejected_;
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
    double worst = 0;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return worst;
}

}  // namespace qbnet
