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

#ifndef QBNET_NET_IO_H
#define QBNET_NET_IO_H

#include <string>

#include "qbnet/bayes_net.h"

namespace qbnet {

/// Parses the net JSON format:
///   {"nodes":[{"name":str,"cardinality":int,"parents":[str,...],"cpt":[float,...]},...]}
/// `cpt` lists each parent configuration's row in turn (first parent most
/// significant), with the node state varying fastest. Parents may refer to
/// nodes declared later. Errors name the first offending node.
BayesNet parse_net_json(const std::string &text);
BayesNet load_net_file(const std::string &path);
std::string net_to_json(const BayesNet &net);

/// Parses {"evidence":{name:state,...},"hypotheses":[name,...]}.
Query parse_query_json(const BayesNet &net, const std::string &text);
Query load_query_file(const BayesNet &net, const std::string &path);

/// Parses a standalone table {"cardinality":int,"parent_cardinalities":[int,...],"cpt":[...]}.
Cpt parse_cpt_json(const std::string &text);

std::string read_text_file(const std::string &path);

}  // namespace qbnet

#endif
