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

#include "cli.h"

#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbnet/bayes_net.h"
#include "qbnet/classical_sampling.h"
#include "qbnet/errors.h"
#include "qbnet/net_io.h"
#include "qbnet/posterior.h"
#include "qbnet/qembed.h"
#include "qbnet/quantum_sampling.h"

namespace qbnet::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct SampleOptions {
    std::string net;
    std::string query;
    std::string method;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> burn;
    int beta = 1;
    std::string proposal = "uniform";
    std::string proposal_file;
    std::string sampling_file;
    std::string policy = "lws";
    int chains = 1;
    int shots = 1;
};

struct CompileOptions {
    std::string net;
    std::string query;
    bool gibbs = false;
    bool mh = false;
    int beta = 1;
    std::string state;
    std::string proposal = "uniform";
    std::string proposal_file;
    std::string out;
    std::string map;
};

ordered_json posterior_json(const PosteriorTable &table) {
    const std::vector<double> est = table.estimates();
    ordered_json j = ordered_json::object();
    for (std::size_t k = 0; k < est.size(); ++k) {
        j[table.key(k)] = est[k];
    }
    return j;
}

nlohmann::json parse_json_file(const std::string &path, const char *what) {
    try {
        return nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string(what) + " file '" + path + "': " + e.what());
    }
}

/// {"nodes": {name: [flattened table], ...}}; unnamed nodes keep their CPT.
SamplingPolicy load_sampling_policy(const BayesNet &net, const Query &query, const std::string &path) {
    const nlohmann::json j = parse_json_file(path, "sampling");
    if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_object()) {
        throw ParseError("sampling file '" + path + "': field 'nodes' must be an object");
    }
    std::vector<Cpt> tables;
    for (const Node &node : net.nodes()) {
        tables.push_back(node.cpt);
    }
    for (const auto &[name, value] : j["nodes"].items()) {
        const NodeId i = net.index_of(name);
        if (!value.is_array()) {
            throw ParseError("sampling file: table of node '" + name + "' must be an array");
        }
        std::vector<double> entries;
        for (const auto &v : value) {
            if (!v.is_number()) {
                throw ParseError("sampling file: table of node '" + name + "' holds a non-number");
            }
            entries.push_back(v.get<double>());
        }
        try {
            tables[i] = Cpt(net.cardinality(i), net.node(i).cpt.parent_cardinalities(), std::move(entries));
        } catch (const InvalidCptError &e) {
            throw InvalidCptError("sampling file: node '" + name + "': " + e.what());
        }
    }
    return SamplingPolicy::general(net, query, std::move(tables));
}

/// {"nodes": {name: [[Q(.|0)], [Q(.|1)], ...]}}; unnamed nodes propose uniformly.
MhProposal load_proposal_file(const BayesNet &net, const std::string &path) {
    const nlohmann::json j = parse_json_file(path, "proposal");
    if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_object()) {
        throw ParseError("proposal file '" + path + "': field 'nodes' must be an object");
    }
    std::vector<std::vector<std::vector<double>>> tables(net.size());
    for (NodeId i = 0; i < net.size(); ++i) {
        const int card = net.cardinality(i);
        tables[i].assign(card, std::vector<double>(card, 1.0 / card));
    }
    for (const auto &[name, value] : j["nodes"].items()) {
        const NodeId i = net.index_of(name);
        try {
            tables[i] = value.get<std::vector<std::vector<double>>>();
        } catch (const nlohmann::json::exception &) {
            throw ParseError("proposal file: node '" + name + "' needs a list of rows");
        }
    }
    MhProposal p = MhProposal::table(std::move(tables));
    p.validate(net);
    return p;
}

MhProposal make_proposal(const BayesNet &net, const std::string &kind, const std::string &file) {
    if (kind == "uniform") {
        return MhProposal::uniform();
    }
    if (kind == "gibbs") {
        return MhProposal::blanket();
    }
    if (kind == "identity") {
        return MhProposal::identity();
    }
    if (kind == "file") {
        if (file.empty()) {
            throw ParseError("--proposal file needs --proposal-file");
        }
        return load_proposal_file(net, file);
    }
    throw ParseError("unknown proposal '" + kind + "'");
}

Assignment parse_state(const BayesNet &net, const Query &query, const std::string &text) {
    Assignment x(net.size(), 0);
    for (const auto &[i, v] : query.evidence) {
        x[i] = v;
    }
    if (text.empty()) {
        return x;
    }
    std::stringstream ss(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
        if (k >= net.size()) {
            throw ParseError("--state has more than " + std::to_string(net.size()) + " values");
        }
        try {
            std::size_t used = 0;
            x[k] = std::stoi(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw ParseError("--state value '" + item + "' is not an integer");
        }
        ++k;
    }
    if (k != net.size()) {
        throw ParseError("--state needs " + std::to_string(net.size()) + " values");
    }
    return x;
}

bool is_chain_method(const std::string &m) {
    return m == "gibbs" || m == "gibbs-sweep" || m == "mh" || m == "q-gibbs" || m == "q-mh";
}

PosteriorTable run_one_chain(const BayesNet &net, const Query &query, const SampleOptions &o,
                             const MhProposal &proposal, std::uint64_t chain) {
    if (o.method == "q-gibbs" || o.method == "q-mh") {
        QuantumSamplerConfig cfg;
        cfg.samples = o.samples;
        cfg.burn_in = o.burn;
        cfg.beta = o.beta;
        cfg.seed = o.seed;
        cfg.chain = chain;
        return o.method == "q-gibbs" ? q_gibbs_sample(net, query, cfg)
                                     : q_metropolis_hastings_sample(net, query, proposal, cfg);
    }
    ChainConfig cfg;
    cfg.steps = o.samples;
    cfg.burn_in = o.burn;
    cfg.beta = o.beta;
    cfg.seed = o.seed;
    cfg.chain = chain;
    if (o.method == "gibbs") {
        return gibbs_sample_random(net, query, cfg);
    }
    if (o.method == "gibbs-sweep") {
        return gibbs_sample_sweep(net, query, cfg);
    }
    return metropolis_hastings_sample(net, query, proposal, cfg);
}

int cmd_exact(const std::string &net_path, const std::string &query_path, std::ostream &out) {
    const BayesNet net = load_net_file(net_path);
    const Query query = load_query_file(net, query_path);
    out << posterior_json(exact_posterior(net, query)).dump() << '\n';
    return 0;
}

int cmd_sample(const SampleOptions &o, std::ostream &out, std::ostream &err) {
    const BayesNet net = load_net_file(o.net);
    const Query query = load_query_file(net, o.query);
    if (o.chains < 1) {
        throw ParseError("--chains must be at least 1");
    }
    if (o.chains > 1 && !is_chain_method(o.method)) {
        throw ParseError("--chains applies only to Markov chain methods");
    }
    PosteriorTable table;
    if (o.method == "rs" || o.method == "lws" || o.method == "is") {
        SamplingPolicy policy = o.method == "rs"    ? SamplingPolicy::rejection(net)
                                : o.method == "lws" ? SamplingPolicy::likelihood_weighted(net, query)
                                                    : (o.sampling_file.empty()
                                                           ? throw ParseError("--method is needs --sampling")
                                                           : load_sampling_policy(net, query, o.sampling_file));
        table = importance_sample(net, query, policy, o.samples, o.seed);
    } else if (o.method == "q-is") {
        SamplingPolicy policy;
        if (o.policy == "rs") {
            policy = SamplingPolicy::rejection(net);
        } else if (o.policy == "lws") {
            policy = SamplingPolicy::likelihood_weighted(net, query);
        } else {
            throw ParseError("--policy must be 'rs' or 'lws'");
        }
        QuantumSamplerConfig cfg;
        cfg.samples = o.samples;
        cfg.seed = o.seed;
        cfg.shots = o.shots;
        table = q_importance_sample(net, query, policy, cfg);
    } else if (is_chain_method(o.method)) {
        const MhProposal proposal = make_proposal(net, o.proposal, o.proposal_file);
        std::vector<std::future<PosteriorTable>> runs;
        for (int c = 0; c < o.chains; ++c) {
            runs.push_back(std::async(std::launch::async, [&, c] {
                return run_one_chain(net, query, o, proposal, static_cast<std::uint64_t>(c));
            }));
        }
        for (int c = 0; c < o.chains; ++c) {
            PosteriorTable part = runs[c].get();
            if (c == 0) {
                table = std::move(part);
            } else {
                table.merge(part);
            }
        }
    } else {
        throw ParseError("unknown method '" + o.method + "'");
    }
    out << posterior_json(table).dump() << '\n';
    err << "method " << o.method << ": " << table.samples() << " samples, " << table.rejected()
        << " rejected, total weight " << table.total_weight() << '\n';
    return 0;
}

void write_or_print(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ParseError("cannot write '" + path + "'");
    }
    f << text;
}

int cmd_compile(const CompileOptions &o, std::ostream &out, std::ostream &err) {
    const BayesNet net = load_net_file(o.net);
    const Query query = o.query.empty() ? Query{} : load_query_file(net, o.query);
    Circuit circuit;
    QubitMap map;
    if (o.gibbs || o.mh) {
        const Assignment x = parse_state(net, query, o.state);
        const GibbsNet g = o.mh ? build_mh_net(net, query, make_proposal(net, o.proposal, o.proposal_file), o.beta, x)
                                : build_gibbs_net(net, query, o.beta, x);
        GibbsCircuit c = gibbs_net_circuit(g);
        circuit = std::move(c.circuit);
        map = std::move(c.qubits);
    } else {
        CompiledCircuit c = qbnet_to_circuit(embed_net(net));
        circuit = std::move(c.circuit);
        map = std::move(c.qubits);
    }
    write_or_print(o.out, serialize(circuit), out);
    if (!o.map.empty()) {
        write_or_print(o.map, qubit_map_json(map) + "\n", out);
    }
    err << "compiled " << circuit.size() << " gates on " << circuit.n_qubits() << " qubits, "
        << circuit.cnot_count() << " CNOTs\n";
    return 0;
}

int cmd_embed(const std::string &cpt_path, const std::string &out_path, std::ostream &out) {
    const QEmbedding e = embed_cpt(parse_cpt_json(read_text_file(cpt_path)));
    write_or_print(out_path, serialize(e.circuit), out);
    return 0;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Sampling and quantum compilation of discrete Bayesian networks", "qbnet"};
    app.require_subcommand(1);

    std::string net_path;
    std::string query_path;
    auto *exact = app.add_subcommand("exact", "Exact posterior by enumeration");
    exact->add_option("--net", net_path, "Net JSON file")->required();
    exact->add_option("--query", query_path, "Query JSON file")->required();

    SampleOptions so;
    auto *sample = app.add_subcommand("sample", "Estimate a posterior by sampling");
    sample->add_option("--net", so.net, "Net JSON file")->required();
    sample->add_option("--query", so.query, "Query JSON file")->required();
    sample->add_option("--method", so.method, "is|rs|lws|gibbs|gibbs-sweep|mh|q-is|q-gibbs|q-mh")->required();
    sample->add_option("--samples", so.samples, "Samples, or node visits for chains")->required();
    sample->add_option("--seed", so.seed, "RNG seed");
    sample->add_option("--burn", so.burn, "Burn-in node visits (default samples/10)");
    sample->add_option("--beta", so.beta, "Sweeps per recorded state");
    sample->add_option("--proposal", so.proposal, "uniform|gibbs|identity|file");
    sample->add_option("--proposal-file", so.proposal_file, "Proposal JSON for --proposal file");
    sample->add_option("--sampling", so.sampling_file, "Sampling tables JSON for --method is");
    sample->add_option("--policy", so.policy, "rs|lws for q-is");
    sample->add_option("--chains", so.chains, "Independent chains, run concurrently");
    sample->add_option("--shots", so.shots, "Shots per circuit execution for q-is");

    CompileOptions co;
    auto *compile = app.add_subcommand("compile", "Compile a net into a circuit");
    compile->add_option("--net", co.net, "Net JSON file")->required();
    compile->add_option("--query", co.query, "Query JSON file supplying evidence");
    compile->add_flag("--gibbs", co.gibbs, "Gibbs transition circuit");
    compile->add_flag("--mh", co.mh, "Metropolis-Hastings transition circuit");
    compile->add_option("--beta", co.beta, "Sweeps per transition");
    compile->add_option("--state", co.state, "Starting state, comma separated");
    compile->add_option("--proposal", co.proposal, "uniform|gibbs|identity|file");
    compile->add_option("--proposal-file", co.proposal_file, "Proposal JSON");
    compile->add_option("--out", co.out, "Circuit text output (default stdout)");
    compile->add_option("--map", co.map, "Qubit map JSON output");

    std::string cpt_path;
    std::string embed_out;
    auto *embed = app.add_subcommand("embed", "q-embedding circuit of a single CPT");
    embed->add_option("--cpt", cpt_path, "CPT JSON file")->required();
    embed->add_option("--out", embed_out, "Circuit text output (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (exact->parsed()) {
            return cmd_exact(net_path, query_path, out);
        }
        if (sample->parsed()) {
            return cmd_sample(so, out, err);
        }
        if (compile->parsed()) {
            return cmd_compile(co, out, err);
        }
        return cmd_embed(cpt_path, embed_out, out);
    } catch (const ParseError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IndexError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError &e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace qbnet::cli
