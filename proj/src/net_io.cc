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

#include "qbnet/net_io.h"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qbnet/errors.h"

namespace qbnet {
namespace {

using nlohmann::json;

json parse_json(const std::string &text, const char *what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

template <typename T>
T field(const json &obj, const char *key, const std::string &context) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(context + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &) {
        throw ParseError(context + ": field '" + key + "' has the wrong type");
    }
}

}  // namespace

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BayesNet parse_net_json(const std::string &text) {
    const json doc = parse_json(text, "net");
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw ParseError("net: missing field 'nodes'");
    }
    const json &entries = doc["nodes"];
    std::map<std::string, NodeId> ids;
    std::vector<Node> nodes(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string context = "node #" + std::to_string(i);
        nodes[i].name = field<std::string>(entries[i], "name", context);
        if (!ids.emplace(nodes[i].name, i).second) {
            throw ParseError("node '" + nodes[i].name + "': duplicate name");
        }
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Node &node = nodes[i];
        const std::string context = "node '" + node.name + "'";
        node.cardinality = field<int>(entries[i], "cardinality", context);
        if (node.cardinality < 1) {
            throw ParseError(context + ": field 'cardinality' must be >= 1");
        }
        const auto parent_names = field<std::vector<std::string>>(entries[i], "parents", context);
        for (const auto &p : parent_names) {
            auto it = ids.find(p);
            if (it == ids.end()) {
                throw ParseError(context + ": field 'parents' names unknown node '" + p + "'");
            }
            node.parents.push_back(it->second);
        }
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Node &node = nodes[i];
        const std::string context = "node '" + node.name + "'";
        std::vector<int> parent_cards;
        for (NodeId p : node.parents) {
            parent_cards.push_back(nodes[p].cardinality);
        }
        auto cpt = field<std::vector<double>>(entries[i], "cpt", context);
        try {
            node.cpt = Cpt(node.cardinality, std::move(parent_cards), std::move(cpt));
        } catch (const InvalidCptError &e) {
            throw InvalidCptError(context + ": field 'cpt': " + e.what());
        }
    }
    return BayesNet(std::move(nodes));
}

BayesNet load_net_file(const std::string &path) {
    return parse_net_json(read_text_file(path));
}

std::string net_to_json(const BayesNet &net) {
    json nodes = json::array();
    for (const Node &node : net.nodes()) {
        json parents = json::array();
        for (NodeId p : node.parents) {
            parents.push_back(net.node(p).name);
        }
        nodes.push_back({{"name", node.name},
                         {"cardinality", node.cardinality},
                         {"parents", parents},
                         {"cpt", node.cpt.entries()}});
    }
    return json{{"nodes", nodes}}.dump(1);
}

Query parse_query_json(const BayesNet &net, const std::string &text) {
    const json doc = parse_json(text, "query");
    if (!doc.is_object()) {
        throw ParseError("query: expected an object");
    }
    Query query;
    if (doc.contains("evidence")) {
        if (!doc["evidence"].is_object()) {
            throw ParseError("query: field 'evidence' must be an object");
        }
        for (const auto &[name, state] : doc["evidence"].items()) {
            if (!state.is_number_integer()) {
                throw ParseError("query: field 'evidence." + name + "' must be an integer");
            }
            query.evidence[net.index_of(name)] = state.get<int>();
        }
    }
    if (doc.contains("hypotheses")) {
        for (const auto &name : field<std::vector<std::string>>(doc, "hypotheses", "query")) {
            query.hypotheses.push_back(net.index_of(name));
        }
    }
    query.validate(net);
    return query;
}

Query load_query_file(const BayesNet &net, const std::string &path) {
    return parse_query_json(net, read_text_file(path));
}

Cpt parse_cpt_json(const std::string &text) {
    const json doc = parse_json(text, "cpt");
    const int card = field<int>(doc, "cardinality", "cpt");
    std::vector<int> parents;
    if (doc.contains("parent_cardinalities")) {
        parents = field<std::vector<int>>(doc, "parent_cardinalities", "cpt");
    }
    Cpt cpt(card, std::move(parents), field<std::vector<double>>(doc, "cpt", "cpt"));
    cpt.validate();
    return cpt;
}

}  // namespace qbnet
