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
//  oracle: independent reference models used as ground truth
//
//  Everything here is written in the most obvious style possible and
//  shares no selection logic with the arbiter, so that equivalence
//  tests between the two actually mean something. Do not "optimize"
//  or fold these into the production code paths.
//
// ----------------------------------------------------------------------

#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <utility>

#include "rrarb/arbiter.hpp"
#include "rrarb/errors.hpp"

namespace rrarb::oracle {

/// Brute-force cyclic search: the first port with its request bit set,
/// walking token_index, token_index+1, ... modulo N; nothing if every
/// bit is clear. A literal N-step loop on purpose.
inline std::optional<std::size_t> scan_next(std::size_t token_index,
                                            const RequestVector& requests) {
  const std::size_t n = requests.size();
  assert(token_index < n);
  for (std::size_t walked = 0; walked < n; ++walked) {
    std::size_t port = token_index + walked;
    if (port >= n) port -= n;
    if (requests[port]) return port;
  }
  return std::nullopt;
}

/// State of the fixed-priority reference FSM: idle, or holding a grant
/// for one port. Gnt(k) is only ever entered when request k is set and
/// every lower-numbered request is clear.
struct FixedPriorityState {
  std::optional<std::size_t> grantee;  // nullopt = Idle

  friend bool operator==(const FixedPriorityState&,
                         const FixedPriorityState&) = default;
};

/// Fixed-priority ASM step. The machine stays in Gnt(k) as long as
/// request k stays up; when it drops (or from idle) the lowest-numbered
/// active request is granted in the same cycle. Reset forces idle.
inline std::pair<FixedPriorityState, GrantVector> fixed_priority_step(
    const FixedPriorityState& state, const RequestVector& requests,
    bool reset) {
  const std::size_t n = requests.size();
  if (state.grantee.has_value() && *state.grantee >= n)
    throw DimensionError("fixed-priority state holds port " +
                         std::to_string(*state.grantee) + " but only " +
                         std::to_string(n) + " request bits were supplied");

  if (reset) return {FixedPriorityState{}, GrantVector::none(n)};

  if (state.grantee.has_value() && requests[*state.grantee])
    return {state, GrantVector::one_hot(n, *state.grantee)};

  for (std::size_t k = 0; k < n; ++k) {
    if (requests[k])
      return {FixedPriorityState{k}, GrantVector::one_hot(n, k)};
  }
  return {FixedPriorityState{}, GrantVector::none(n)};
}

}  // namespace rrarb::oracle
