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

#include <gtest/gtest.h>

#include <set>

#include "qbnet/bayes_net.h"
#include "qbnet/errors.h"
#include "qbnet/net_io.h"
#include "qbnet/posterior.h"
#include "qbnet/rng.h"
#include "test_util.h"

namespace qbnet {
namespace {

using testing::oracle_joint;
using testing::oracle_posterior;

Node binary_root(const std::string &name, double p1) { return {name, 2, {}, Cpt(2, {}, {1 - p1, p1})}; }

Node binary_child(const std::string &name, std::vector<NodeId> parents, std::vector<double> p1) {
    std::vector<double> entries;
    std::vector<int> cards(parents.size(), 2);
    for (double p : p1) {
        entries.push_back(1 - p);
        entries.push_back(p);
    }
    return {name, 2, std::move(parents), Cpt(2, cards, entries)};
}

// x'' -> x' -> x, x -> a, a'' -> a' -> a, a -> b
BayesNet blanket_figure_net(std::mt19937_64 &gen) {
    std::vector<Node> nodes;
    nodes.push_back({"x2", 2, {}, testing::random_cpt(gen, 2, {})});
    nodes.push_back({"x1", 2, {0}, testing::random_cpt(gen, 2, {2})});
    nodes.push_back({"x", 2, {1}, testing::random_cpt(gen, 2, {2})});
    nodes.push_back({"a2", 2, {}, testing::random_cpt(gen, 2, {})});
    nodes.push_back({"a1", 2, {3}, testing::random_cpt(gen, 2, {2})});
    nodes.push_back({"a", 2, {2, 4}, testing::random_cpt(gen, 2, {2, 2})});
    nodes.push_back({"b", 2, {5}, testing::random_cpt(gen, 2, {2})});
    return BayesNet(std::move(nodes));
}

TEST(TopologicalOrder, Chain) {
    BayesNet net({binary_root("a", 0.5), binary_child("b", {0}, {0.2, 0.7}), binary_child("c", {1}, {0.1, 0.9})});
    EXPECT_EQ(topological_order(net), (std::vector<NodeId>{0, 1, 2}));
}

TEST(TopologicalOrder, SingleNode) {
    BayesNet net({binary_root("a", 0.3)});
    EXPECT_EQ(topological_order(net), (std::vector<NodeId>{0}));
}

TEST(TopologicalOrder, DiamondAndTies) {
    BayesNet net({binary_root("a", 0.5), binary_child("b", {0}, {0.2, 0.7}), binary_child("c", {0}, {0.4, 0.6}),
                  binary_child("d", {1, 2}, {0.1, 0.2, 0.3, 0.4})});
    EXPECT_EQ(topological_order(net), (std::vector<NodeId>{0, 1, 2, 3}));
    EXPECT_EQ(topological_order({{1}, {}, {0}}), (std::vector<NodeId>{1, 0, 2}));
    EXPECT_EQ(topological_order({{}, {}, {}}), (std::vector<NodeId>{0, 1, 2}));
}

TEST(TopologicalOrder, CycleIsRejected) {
    EXPECT_THROW(topological_order({{2}, {0}, {1}}), CycleError);
    std::vector<Node> nodes{binary_child("a", {1}, {0.5, 0.5}), binary_child("b", {0}, {0.5, 0.5})};
    EXPECT_THROW(BayesNet{nodes}, CycleError);
}

TEST(TopologicalOrder, RandomDagsArePermutationsRespectingParents) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 1 + static_cast<int>(gen() % 12);
        const BayesNet net = testing::random_net(gen, n, {2, 3}, 3, 0.4);
        const auto order = topological_order(net);
        ASSERT_EQ(order.size(), net.size());
        std::vector<int> position(n, -1);
        for (std::size_t k = 0; k < order.size(); ++k) {
            ASSERT_EQ(position[order[k]], -1);
            position[order[k]] = static_cast<int>(k);
        }
        for (NodeId i = 0; i < net.size(); ++i) {
            for (NodeId p : net.parents(i)) {
                EXPECT_LT(position[p], position[i]);
            }
        }
    }
}

TEST(MarkovBlanket, FigureNet) {
    std::mt19937_64 gen(3);
    const BayesNet net = blanket_figure_net(gen);
    EXPECT_EQ(markov_blanket(net, 2), (std::vector<NodeId>{1, 4, 5}));
}

TEST(MarkovBlanket, IsolatedNode) {
    BayesNet net({binary_root("a", 0.5), binary_root("b", 0.2)});
    EXPECT_TRUE(markov_blanket(net, 0).empty());
}

TEST(MarkovBlanket, ConditionalDependsOnlyOnBlanket) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const BayesNet net = testing::random_net(gen, 6, {2, 3}, 2, 0.5);
        const auto cards = testing::cardinalities(net);
        for (NodeId i = 0; i < net.size(); ++i) {
            const auto mb = markov_blanket(net, i);
            const std::set<NodeId> inside(mb.begin(), mb.end());
            // Brute force: P(x_i | all others) from joint ratios, grouped by the
            // blanket values, must agree across every outside configuration.
            std::map<std::vector<int>, std::vector<double>> seen;
            testing::for_each_assignment(cards, [&](const std::vector<int> &x) {
                std::vector<double> cond(net.cardinality(i));
                std::vector<int> y = x;
                double sum = 0;
                for (int s = 0; s < net.cardinality(i); ++s) {
                    y[i] = s;
                    cond[s] = oracle_joint(net, y);
                    sum += cond[s];
                }
                for (double &v : cond) {
                    v /= sum;
                }
                std::vector<int> key;
                for (NodeId m : mb) {
                    key.push_back(x[m]);
                }
                auto [it, fresh] = seen.emplace(key, cond);
                if (!fresh) {
                    for (int s = 0; s < net.cardinality(i); ++s) {
                        ASSERT_NEAR(it->second[s], cond[s], 1e-12);
                    }
                }
            });
        }
    }
}

TEST(MarkovBlanket, ChainMiddle) {
    BayesNet net({binary_root("a", 0.5), binary_child("b", {0}, {0.2, 0.7}), binary_child("c", {1}, {0.1, 0.9})});
    EXPECT_EQ(markov_blanket(net, 1), (std::vector<NodeId>{0, 2}));
}

TEST(JointProbability, SingleNode) {
    BayesNet net({binary_root("a", 0.3)});
    EXPECT_DOUBLE_EQ(joint_probability(net, std::vector<int>{1}), 0.3);
}

TEST(JointProbability, DeterministicChain) {
    std::vector<Node> nodes;
    nodes.push_back({"a", 2, {}, Cpt::deterministic(2, {}, {1})});
    nodes.push_back({"b", 2, {0}, Cpt::deterministic(2, {2}, {1, 0})});
    nodes.push_back({"c", 3, {1}, Cpt::deterministic(3, {2}, {2, 1})});
    BayesNet net(std::move(nodes));
    EXPECT_EQ(joint_probability(net, std::vector<int>{1, 0, 2}), 1.0);
    EXPECT_EQ(joint_probability(net, std::vector<int>{1, 1, 2}), 0.0);
}

TEST(JointProbability, MatchesDirectProduct) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 30; ++trial) {
        const BayesNet net = testing::random_net(gen, 3, {2, 3, 4});
        testing::for_each_assignment(testing::cardinalities(net), [&](const std::vector<int> &x) {
            EXPECT_NEAR(joint_probability(net, x), oracle_joint(net, x), 1e-15);
        });
    }
}

TEST(JointProbability, SumsToOne) {
    std::mt19937_64 gen(9);
    for (int n : {1, 4, 10, 16}) {
        const BayesNet net = testing::random_net(gen, n, {2}, 3, 0.4);
        double sum = 0;
        testing::for_each_assignment(testing::cardinalities(net),
                                     [&](const std::vector<int> &x) { sum += joint_probability(net, x); });
        EXPECT_NEAR(sum, 1.0, 1e-9) << n;
    }
}

TEST(ExactPosterior, NoEvidence) {
    BayesNet net({binary_root("a", 0.3)});
    Query q;
    q.hypotheses = {0};
    const auto est = exact_posterior(net, q).estimates();
    EXPECT_NEAR(est[0], 0.7, 1e-15);
    EXPECT_NEAR(est[1], 0.3, 1e-15);
}

TEST(ExactPosterior, EvidenceOnEverythingElse) {
    BayesNet net({binary_root("a", 0.5), Node{"b", 2, {0}, Cpt::deterministic(2, {2}, {1, 0})}});
    Query q;
    q.evidence = {{0, 1}};
    q.hypotheses = {1};
    const auto est = exact_posterior(net, q).estimates();
    EXPECT_EQ(est[0], 1.0);
    EXPECT_EQ(est[1], 0.0);
}

TEST(ExactPosterior, MatchesIndependentEnumeration) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 10; ++trial) {
        const BayesNet net = testing::random_net(gen, 8, {2}, 3, 0.4);
        Query q;
        q.evidence = {{1, static_cast<int>(gen() % 2)}, {6, static_cast<int>(gen() % 2)}};
        q.hypotheses = {4, 0, 7};
        const auto est = exact_posterior(net, q).estimates();
        const auto oracle = oracle_posterior(net, q);
        double sum = 0;
        for (std::size_t k = 0; k < est.size(); ++k) {
            EXPECT_NEAR(est[k], oracle[k], 1e-12);
            sum += est[k];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(ExactPosterior, Errors) {
    BayesNet net({binary_root("a", 0.0), binary_root("b", 0.5)});
    Query q;
    q.evidence = {{0, 1}};
    q.hypotheses = {1};
    EXPECT_THROW(exact_posterior(net, q), ZeroEvidenceError);
    q.evidence.clear();
    EXPECT_THROW(exact_posterior(net, q, 3), TooLargeError);
}

TEST(ConditionalGivenBlanket, ChildlessNodeEqualsCptRow) {
    BayesNet net({binary_root("a", 0.5), binary_child("b", {0}, {0.2, 0.7})});
    const auto row = conditional_given_blanket(net, 1, std::vector<int>{1, 0});
    EXPECT_NEAR(row[1], 0.7, 1e-15);
}

TEST(ConditionalGivenBlanket, MatchesExactPosteriorGivenRest) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 15; ++trial) {
        const BayesNet net = testing::random_net(gen, 5, {2, 3}, 2, 0.5, 0.2);
        testing::for_each_assignment(testing::cardinalities(net), [&](const std::vector<int> &x) {
            for (NodeId i = 0; i < net.size(); ++i) {
                Query q;
                for (NodeId m = 0; m < net.size(); ++m) {
                    if (m != i) {
                        q.evidence[m] = x[m];
                    }
                }
                q.hypotheses = {i};
                std::vector<double> row;
                if (!try_conditional_given_blanket(net, i, x, row)) {
                    EXPECT_THROW(conditional_given_blanket(net, i, x), DegenerateError);
                    continue;
                }
                const auto oracle = oracle_posterior(net, q);
                if (std::isnan(oracle[0])) {
                    // Nodes outside the blanket rule out the rest of x.
                    continue;
                }
                for (std::size_t s = 0; s < row.size(); ++s) {
                    EXPECT_NEAR(row[s], oracle[s], 1e-10);
                }
            }
        });
    }
}

TEST(ConditionalGivenBlanket, FigureNetNodeDependsOnItsBlanket) {
    std::mt19937_64 gen(19);
    const BayesNet net = blanket_figure_net(gen);
    testing::for_each_assignment(testing::cardinalities(net), [&](const std::vector<int> &x) {
        Query q;
        q.evidence = {{1, x[1]}, {4, x[4]}, {5, x[5]}};
        q.hypotheses = {2};
        const auto oracle = oracle_posterior(net, q);
        const auto row = conditional_given_blanket(net, 2, x);
        EXPECT_NEAR(row[0], oracle[0], 1e-12);
        EXPECT_NEAR(row[1], oracle[1], 1e-12);
    });
}

TEST(Cpt, Validation) {
    EXPECT_THROW(Cpt(2, {}, {0.5, 0.6}).validate(), InvalidCptError);
    EXPECT_THROW(Cpt(2, {}, {1.5, -0.5}).validate(), InvalidCptError);
    EXPECT_THROW(Cpt(2, {2}, {0.5, 0.5}), InvalidCptError);
    EXPECT_NO_THROW(Cpt(1, {3}, {1.0, 1.0, 1.0}));
    const Cpt c(3, {2, 3}, std::vector<double>(18, 1.0 / 3));
    EXPECT_EQ(c.config_index(std::vector<int>{1, 2}), 5U);
    EXPECT_EQ(c.config_values(5), (std::vector<int>{1, 2}));
}

TEST(BayesNet, ParentCardinalityMismatch) {
    std::vector<Node> nodes{Node{"a", 3, {}, Cpt(3, {}, {0.2, 0.3, 0.5})}, binary_child("b", {0}, {0.1, 0.2})};
    EXPECT_THROW(BayesNet{nodes}, InvalidCptError);
}

TEST(BayesNet, EncodeDecode) {
    std::mt19937_64 gen(23);
    const BayesNet net = testing::random_net(gen, 4, {2, 3});
    for (std::uint64_t s = 0; s < net.state_space_size(); ++s) {
        EXPECT_EQ(net.encode(net.decode(s)), s);
    }
}

TEST(NetIo, RoundTripAndNamedErrors) {
    const std::string text = R"({"nodes":[
        {"name":"b","cardinality":2,"parents":["a"],"cpt":[0.9,0.1,0.2,0.8]},
        {"name":"a","cardinality":2,"parents":[],"cpt":[0.4,0.6]}]})";
    const BayesNet net = parse_net_json(text);
    EXPECT_EQ(net.index_of("a"), 1U);
    EXPECT_EQ(net.parents(0), (std::vector<NodeId>{1}));
    const BayesNet again = parse_net_json(net_to_json(net));
    EXPECT_EQ(again.node(0).cpt.entries(), net.node(0).cpt.entries());

    try {
        parse_net_json(R"({"nodes":[{"name":"q","cardinality":2,"parents":[],"cpt":[0.5,0.6]}]})");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("'q'"), std::string::npos) << e.what();
    }
    try {
        parse_net_json(R"({"nodes":[{"name":"q","cardinality":2,"parents":["zz"],"cpt":[0.5,0.5]}]})");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_net_json("{"), ParseError);
}

TEST(Query, DisjointnessAndRanges) {
    BayesNet net({binary_root("a", 0.5), binary_root("b", 0.5)});
    EXPECT_THROW(parse_query_json(net, R"({"evidence":{"a":1},"hypotheses":["a"]})"), ParseError);
    EXPECT_THROW(parse_query_json(net, R"({"evidence":{"a":2},"hypotheses":["b"]})"), ParseError);
    EXPECT_THROW(parse_query_json(net, R"({"evidence":{},"hypotheses":["c"]})"), ParseError);
    const Query q = parse_query_json(net, R"({"evidence":{"b":0},"hypotheses":["a"]})");
    EXPECT_EQ(q.evidence.at(1), 0);
}

TEST(PosteriorTable, TotalsAndMerge) {
    BayesNet net({binary_root("a", 0.5), Node{"b", 3, {}, Cpt(3, {}, {0.2, 0.3, 0.5})}});
    PosteriorTable t(net, {1, 0});
    EXPECT_EQ(t.size(), 6U);
    t.add_assignment(std::vector<int>{1, 2}, 0.5);
    t.add_assignment(std::vector<int>{0, 0}, 1.5);
    t.add_rejected();
    EXPECT_EQ(t.key(t.tuple_index(std::vector<int>{1, 2})), "2,1");
    PosteriorTable u(net, {1, 0});
    u.add_assignment(std::vector<int>{1, 2}, 2.0);
    PosteriorTable left = t;
    left.merge(u);
    EXPECT_DOUBLE_EQ(left.total_weight(), 4.0);
    double sum = 0;
    for (double w : left.weights()) {
        sum += w;
    }
    EXPECT_NEAR(sum, left.total_weight(), 1e-12);
    EXPECT_EQ(left.samples(), 4U);
    EXPECT_EQ(left.rejected(), 1U);
    EXPECT_THROW(PosteriorTable(net, {0}).estimates(), AllRejectedError);
}

TEST(Rng, StreamsAndBoundaries) {
    Rng a(42, 0), b(42, 0), c(42, 1);
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    const std::vector<double> half{0.5, 0.5};
    EXPECT_EQ(categorical_from_uniform(half, 0.5), 1U);
    EXPECT_EQ(categorical_from_uniform(half, 0.4999999), 0U);
    const std::vector<double> gap{0.5, 0.0, 0.5};
    EXPECT_EQ(categorical_from_uniform(gap, 0.5), 2U);
    EXPECT_EQ(categorical_from_uniform(gap, 1.0), 2U);
    Rng r(1);
    for (int k = 0; k < 1000; ++k) {
        EXPECT_LT(r.uniform_index(7), 7U);
        const double u = r.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

}  // namespace
}  // namespace qbnet
