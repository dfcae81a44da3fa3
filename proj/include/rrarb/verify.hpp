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
//  verify: exhaustive/randomized equivalence checks between the
//  arbiter, the gate models and the reference oracles. Each check
//  returns the first counterexample found, or nothing when the sweep
//  is clean. Used by `rrarb verify` and by the acceptance suite.
//
// ----------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrarb/arbiter.hpp"
#include "rrarb/netlist.hpp"
#include "rrarb/oracle.hpp"
#include "rrarb/workload.hpp"

namespace rrarb {

/// Exhaustive sweeps beyond this many ports are refused (2^N request
/// vectors per port count).
inline constexpr std::size_t kVerifyPortLimit = 12;

struct VerifyCounterexample {
  std::string check;
  std::size_t num_ports = 0;
  std::size_t token = 0;
  RequestVector requests;
  std::string detail;
};

inline std::string format_bits(const RequestVector& bits) {
  std::string s;
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline std::string describe(const VerifyCounterexample& cx) {
  return cx.check + ": N=" + std::to_string(cx.num_ports) +
         " token=" + std::to_string(cx.token) +
         " requests=" + format_bits(cx.requests) + " (port 0 first): " +
         cx.detail;
}

inline RequestVector requests_from_mask(std::size_t n, std::uint64_t mask) {
  RequestVector reqs(n, false);
  for (std::size_t p = 0; p < n; ++p) reqs[p] = (mask >> p) & 1u;
  return reqs;
}

/// The arbiter's fresh-grant selection: one SkipScan step from idle
/// with the pointer at `token`.
inline std::optional<std::size_t> skip_scan_selection(
    std::size_t num_ports, std::size_t token, const RequestVector& requests) {
  ArbiterConfig cfg{num_ports, 1, Policy::kSkipScan};
  ArbiterState state = new_arbiter(cfg);
  state.token_index = token;
  return step(cfg, state, requests).output.grant.port();
}

/// Checks the given fresh-grant selector against oracle::scan_next over
/// every (N, token, request vector) with N <= max_ports. The selector
/// parameter exists so tests can inject a broken one and watch the
/// check catch it; production callers pass skip_scan_selection.
template <typename SelectFn>
std::optional<VerifyCounterexample> check_scan_equivalence(
    std::size_t max_ports, SelectFn&& select) {
  for (std::size_t n = 1; n <= max_ports; ++n) {
    for (std::size_t token = 0; token < n; ++token) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const RequestVector reqs = requests_from_mask(n, mask);
        const std::optional<std::size_t> expected =
            oracle::scan_next(token, reqs);
        const std::optional<std::size_t> actual = select(n, token, reqs);
        if (expected != actual) {
          auto show = [](const std::optional<std::size_t>& v) {
            return v ? std::to_string(*v) : std::string("none");
          };
          return VerifyCounterexample{
              "scan-equivalence", n, token, reqs,
              "oracle selects " + show(expected) + ", arbiter selects " +
                  show(actual)};
        }
      }
    }
  }
  return std::nullopt;
}

inline std::optional<VerifyCounterexample> check_scan_equivalence(
    std::size_t max_ports) {
  return check_scan_equivalence(max_ports, skip_scan_selection);
}

/// Runs SkipScan with the rotation pointer pinned to 0 and an unlimited
/// slice against the fixed-priority reference FSM on random traces:
/// cyclic search from 0 is exactly lowest-index priority, so the two
/// must agree grant-for-grant on every cycle.
inline std::optional<VerifyCounterexample> check_fixed_priority_equivalence(
    std::size_t max_ports, std::size_t num_traces, std::size_t trace_len,
    std::uint64_t seed) {
  for (std::size_t n = 1; n <= max_ports; ++n) {
    SplitMix64 rng(seed ^ (0x51ed2701ULL + n));
    for (std::size_t t = 0; t < num_traces; ++t) {
      ArbiterConfig cfg{n, std::nullopt, Policy::kSkipScan};
      ArbiterState state = new_arbiter(cfg);
      oracle::FixedPriorityState ref;
      for (std::size_t c = 0; c < trace_len; ++c) {
        const std::uint64_t word = rng.next();
        const RequestVector reqs = requests_from_mask(n, word);
        const bool reset = ((word >> 60) & 0xf) == 0;  // 1/16 of cycles

        StepResult r = step(cfg, state, reqs, reset);
        state = r.state;
        state.token_index = 0;  // pin the pointer between edges

        auto [ref_next, ref_grant] = oracle::fixed_priority_step(ref, reqs, reset);
        ref = ref_next;

        if (r.output.grant != ref_grant) {
          auto show = [](const GrantVector& gv) {
            return gv.any() ? std::to_string(*gv.port()) : std::string("none");
          };
          return VerifyCounterexample{
              "fixed-priority-equivalence", n, 0, reqs,
              "trace " + std::to_string(t) + " cycle " + std::to_string(c) +
                  (reset ? " (reset)" : "") + ": reference grants " +
                  show(ref_grant) + ", arbiter grants " + show(r.output.grant)};
        }
      }
    }
  }
  return std::nullopt;
}

/// Evaluates both gate-model shapes on every (token, request) stimulus
/// and demands the one-hot encoding of oracle::scan_next from each.
inline std::optional<VerifyCounterexample> check_gate_equivalence(
    std::size_t max_ports) {
  for (std::size_t n = 1; n <= max_ports; ++n) {
    const ArbiterGateModel chain = build_chain(n);
    const ArbiterGateModel tree = build_tree(n);
    for (std::size_t token = 0; token < n; ++token) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const RequestVector reqs = requests_from_mask(n, mask);
        const std::optional<std::size_t> winner =
            oracle::scan_next(token, reqs);
        std::vector<bool> expected(n, false);
        if (winner) expected[*winner] = true;

        const std::vector<bool> chain_out =
            evaluate(chain.graph, arbiter_assignment(chain, token, reqs));
        const std::vector<bool> tree_out =
            evaluate(tree.graph, arbiter_assignment(tree, token, reqs));
        if (chain_out != expected)
          return VerifyCounterexample{"gate-equivalence(chain)", n, token,
                                      reqs,
                                      "chain grants " + format_bits(chain_out) +
                                          ", expected " +
                                          format_bits(expected)};
        if (tree_out != expected)
          return VerifyCounterexample{"gate-equivalence(tree)", n, token, reqs,
                                      "tree grants " + format_bits(tree_out) +
                                          ", expected " +
                                          format_bits(expected)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace rrarb
