/*
 * Copyright 2026 The rrarb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ----------------------------------------------------------------------
//
//  netlist: abstract gate-level model of the N-port grant logic
//
//  Builds the combinational block that maps (registered one-hot token,
//  request lines) to one-hot grant lines, in two shapes:
//
//    build_chain - ripple search. The token injects an "armed" signal
//        that walks down a doubled (2N slot) carry chain, is killed by
//        the first active request it meets, and fires that slot's
//        grant. Depth grows linearly with N.
//
//    build_tree  - flat search. For every (start, port) pair a single
//        wide AND recognizes "the walk from this token start first
//        lands here"; per port these recognizers meet in a balanced
//        binary OR reduction of ceil(log2 N) levels. Depth grows with
//        log N only.
//
//  Delay is modeled as unit-delay gate levels with unconstrained
//  fan-in (LUT-style), not physical time: critical_path_depth counts
//  gates on the longest source-to-output path. REG nodes are sources
//  for combinational analysis (their fan-in, if any, is the
//  sequential update path and is ignored here).
//
// ----------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rrarb/arbiter.hpp"
#include "rrarb/errors.hpp"

namespace rrarb {

enum class GateKind { kInput, kReg, kAnd, kOr, kNot };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::kInput: return "INPUT";
    case GateKind::kReg: return "REG";
    case GateKind::kAnd: return "AND";
    case GateKind::kOr: return "OR";
    case GateKind::kNot: return "NOT";
  }
  return "?";
}

using NodeId = std::size_t;

struct GateNode {
  GateKind kind = GateKind::kInput;
  std::vector<NodeId> fanin;
};

inline bool is_source(GateKind k) {
  return k == GateKind::kInput || k == GateKind::kReg;
}

/// A directed gate graph. `add_gate` only accepts already-existing
/// fan-in ids, so graphs built through it are acyclic by construction;
/// `connect` can wire anything to anything and is how deliberately
/// broken graphs are made in tests. Analysis validates acyclicity over
/// combinational edges and reports a structural error otherwise.
class GateGraph {
 public:
  NodeId add_input() { return add_node(GateKind::kInput, {}); }
  NodeId add_reg() { return add_node(GateKind::kReg, {}); }

  NodeId add_gate(GateKind kind, std::vector<NodeId> fanin) {
    if (is_source(kind))
      throw GraphStructureError("use add_input/add_reg for source nodes");
    if (kind == GateKind::kNot && fanin.size() != 1)
      throw GraphStructureError("NOT takes exactly one input");
    if (kind != GateKind::kNot && fanin.size() < 2)
      throw GraphStructureError(to_string(kind) + " takes at least two inputs");
    for (NodeId id : fanin) check_id(id);
    return add_node(kind, std::move(fanin));
  }

  /// Low-level edge append; may create combinational cycles.
  void connect(NodeId from, NodeId to) {
    check_id(from);
    check_id(to);
    nodes_[to].fanin.push_back(from);
  }

  void mark_output(NodeId id) {
    check_id(id);
    outputs_.push_back(id);
  }

  std::size_t size() const { return nodes_.size(); }
  const GateNode& node(NodeId id) const {
    check_id(id);
    return nodes_[id];
  }
  const std::vector<NodeId>& outputs() const { return outputs_; }

 private:
  NodeId add_node(GateKind kind, std::vector<NodeId> fanin) {
    nodes_.push_back({kind, std::move(fanin)});
    return nodes_.size() - 1;
  }

  void check_id(NodeId id) const {
    if (id >= nodes_.size())
      throw GraphStructureError("node id " + std::to_string(id) +
                                " out of range");
  }

  std::vector<GateNode> nodes_;
  std::vector<NodeId> outputs_;
};

namespace detail {

/// Kahn topological order over combinational edges only (REG fan-in is
/// sequential and skipped). Throws on a combinational cycle.
inline std::vector<NodeId> topo_order(const GateGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> indegree(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (is_source(g.node(v).kind)) continue;
    indegree[v] = g.node(v).fanin.size();
  }
  // fanout adjacency
  std::vector<std::vector<NodeId>> fanout(n);
  for (NodeId v = 0; v < n; ++v) {
    if (is_source(g.node(v).kind)) continue;
    for (NodeId u : g.node(v).fanin) fanout[u].push_back(v);
  }

  std::deque<NodeId> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);

  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    NodeId v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (NodeId w : fanout[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  if (order.size() != n)
    throw GraphStructureError("combinational cycle detected");
  return order;
}

}  // namespace detail

/// Longest source-to-output path in gate levels. INPUT/REG nodes count
/// 0, every combinational gate on the path counts 1. With no outputs
/// designated, the deepest node anywhere is reported.
inline std::size_t critical_path_depth(const GateGraph& g) {
  const std::vector<NodeId> order = detail::topo_order(g);
  std::vector<std::size_t> depth(g.size(), 0);
  for (NodeId v : order) {
    const GateNode& node = g.node(v);
    if (is_source(node.kind)) continue;
    std::size_t best = 0;
    for (NodeId u : node.fanin) best = std::max(best, depth[u]);
    depth[v] = best + 1;
  }
  std::size_t result = 0;
  if (g.outputs().empty()) {
    for (NodeId v = 0; v < g.size(); ++v) result = std::max(result, depth[v]);
  } else {
    for (NodeId v : g.outputs()) result = std::max(result, depth[v]);
  }
  return result;
}

/// Evaluates the graph for one input assignment (a value for every
/// INPUT and REG node, keyed by node id) and returns the designated
/// output values in designation order.
inline std::vector<bool> evaluate(
    const GateGraph& g, const std::unordered_map<NodeId, bool>& sources) {
  const std::vector<NodeId> order = detail::topo_order(g);
  std::vector<char> value(g.size(), 0);
  for (NodeId v : order) {
    const GateNode& node = g.node(v);
    switch (node.kind) {
      case GateKind::kInput:
      case GateKind::kReg: {
        auto it = sources.find(v);
        if (it == sources.end())
          throw GraphInputError("no value assigned to source node " +
                                std::to_string(v));
        value[v] = it->second ? 1 : 0;
        break;
      }
      case GateKind::kAnd: {
        char acc = 1;
        for (NodeId u : node.fanin) acc &= value[u];
        value[v] = acc;
        break;
      }
      case GateKind::kOr: {
        char acc = 0;
        for (NodeId u : node.fanin) acc |= value[u];
        value[v] = acc;
        break;
      }
      case GateKind::kNot:
        value[v] = value[node.fanin[0]] ? 0 : 1;
        break;
    }
  }
  std::vector<bool> out;
  out.reserve(g.outputs().size());
  for (NodeId v : g.outputs()) out.push_back(value[v] != 0);
  return out;
}

/// The grant-logic graph together with its port-indexed source nodes:
/// request_inputs[i] and token_regs[i] belong to port i, and the
/// graph's designated outputs are the grant nets in port order.
struct ArbiterGateModel {
  GateGraph graph;
  std::vector<NodeId> request_inputs;
  std::vector<NodeId> token_regs;
};

namespace detail {

inline void require_ports(std::size_t num_ports) {
  if (num_ports == 0) throw ConfigError("num_ports must be >= 1");
}

inline ArbiterGateModel single_port_model() {
  ArbiterGateModel m;
  NodeId r0 = m.graph.add_input();
  NodeId t0 = m.graph.add_reg();
  NodeId g0 = m.graph.add_gate(GateKind::kAnd, {t0, r0});
  m.graph.mark_output(g0);
  m.request_inputs = {r0};
  m.token_regs = {t0};
  return m;
}

}  // namespace detail

/// Ripple realization. The search walks a doubled carry chain of 2N
/// slots so the cyclic wrap needs no feedback edge: slot j covers port
/// j mod N, the token arms the chain once at its own slot in the first
/// copy, the first armed slot with an active request fires and disarms
/// everything after it. grant_i is the OR of port i's two slots.
inline ArbiterGateModel build_chain(std::size_t num_ports) {
  detail::require_ports(num_ports);
  if (num_ports == 1) return detail::single_port_model();

  const std::size_t n = num_ports;
  ArbiterGateModel m;
  GateGraph& g = m.graph;

  for (std::size_t p = 0; p < n; ++p)
    m.request_inputs.push_back(g.add_input());
  for (std::size_t p = 0; p < n; ++p) m.token_regs.push_back(g.add_reg());

  std::vector<NodeId> not_req(n);
  for (std::size_t p = 0; p < n; ++p)
    not_req[p] = g.add_gate(GateKind::kNot, {m.request_inputs[p]});

  // armed[j]: the search is active at slot j.
  std::vector<NodeId> armed(2 * n);
  armed[0] = m.token_regs[0];
  for (std::size_t j = 0; j + 1 < n; ++j) {
    NodeId pass = g.add_gate(GateKind::kAnd, {armed[j], not_req[j]});
    armed[j + 1] = g.add_gate(GateKind::kOr, {pass, m.token_regs[j + 1]});
  }
  for (std::size_t j = n - 1; j + 1 < 2 * n; ++j)
    armed[j + 1] = g.add_gate(GateKind::kAnd, {armed[j], not_req[j % n]});

  std::vector<NodeId> fire(2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j)
    fire[j] = g.add_gate(GateKind::kAnd, {armed[j], m.request_inputs[j % n]});

  for (std::size_t p = 0; p < n; ++p)
    g.mark_output(g.add_gate(GateKind::kOr, {fire[p], fire[p + n]}));

  return m;
}

/// Flat realization. recognizer(s, i) = token_s AND request_i AND the
/// complements of every request strictly between s and i in cyclic
/// order, as a single wide AND; grant_i reduces its N recognizers with
/// a balanced binary OR tree, giving 2 + ceil(log2 N) total levels.
inline ArbiterGateModel build_tree(std::size_t num_ports) {
  detail::require_ports(num_ports);
  if (num_ports == 1) return detail::single_port_model();

  const std::size_t n = num_ports;
  ArbiterGateModel m;
  GateGraph& g = m.graph;

  for (std::size_t p = 0; p < n; ++p)
    m.request_inputs.push_back(g.add_input());
  for (std::size_t p = 0; p < n; ++p) m.token_regs.push_back(g.add_reg());

  std::vector<NodeId> not_req(n);
  for (std::size_t p = 0; p < n; ++p)
    not_req[p] = g.add_gate(GateKind::kNot, {m.request_inputs[p]});

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<NodeId> terms;
    terms.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<NodeId> fanin = {m.token_regs[s], m.request_inputs[i]};
      // every port the walk checks before reaching i must be silent;
      // the walk starts at s itself, so s == i needs no complements
      for (std::size_t j = s; j != i; j = (j + 1) % n)
        fanin.push_back(not_req[j]);
      terms.push_back(g.add_gate(GateKind::kAnd, std::move(fanin)));
    }
    // balanced binary OR reduction
    while (terms.size() > 1) {
      std::vector<NodeId> next;
      next.reserve((terms.size() + 1) / 2);
      for (std::size_t k = 0; k + 1 < terms.size(); k += 2)
        next.push_back(g.add_gate(GateKind::kOr, {terms[k], terms[k + 1]}));
      if (terms.size() % 2 == 1) next.push_back(terms.back());
      terms = std::move(next);
    }
    g.mark_output(terms.front());
  }
  return m;
}

/// Source assignment for one (token position, request vector) stimulus:
/// the token regs carry the one-hot token, the inputs carry requests.
inline std::unordered_map<NodeId, bool> arbiter_assignment(
    const ArbiterGateModel& m, std::size_t token_index,
    const RequestVector& requests) {
  if (requests.size() != m.request_inputs.size())
    throw DimensionError("request vector has " +
                         std::to_string(requests.size()) + " bits, expected " +
                         std::to_string(m.request_inputs.size()));
  if (token_index >= m.token_regs.size())
    throw DimensionError("token index out of range");
  std::unordered_map<NodeId, bool> sources;
  for (std::size_t p = 0; p < requests.size(); ++p) {
    sources[m.request_inputs[p]] = requests[p];
    sources[m.token_regs[p]] = (p == token_index);
  }
  return sources;
}

/// Text netlist: one line per node, `id kind fanin1 fanin2 ...`.
inline void write_netlist(const GateGraph& g, std::ostream& out) {
  for (NodeId v = 0; v < g.size(); ++v) {
    const GateNode& node = g.node(v);
    out << v << ' ' << to_string(node.kind);
    for (NodeId u : node.fanin) out << ' ' << u;
    out << '\n';
  }
}

struct DepthRow {
  std::size_t n = 0;
  std::size_t chain_depth = 0;
  std::size_t tree_depth = 0;
};

inline DepthRow depth_row(std::size_t num_ports) {
  return {num_ports, critical_path_depth(build_chain(num_ports).graph),
          critical_path_depth(build_tree(num_ports).graph)};
}

}  // namespace rrarb
