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
//  arbiter: deterministic, synchronous N-port round-robin arbiter
//
//  One step() call models one positive clock edge: request lines are
//  sampled, at most one grant line is driven for that cycle, and the
//  returned state is what the registers hold going into the next cycle.
//
//  Two selectable policies:
//    SkipScan    - each arbitration scans cyclically from the stored
//                  pointer and grants the first requester it finds, so
//                  no cycle is wasted while any request is pending.
//    TokenRotate - strict slot model: only the port currently holding
//                  the token may be granted; a slot whose owner is not
//                  requesting is a wasted cycle (turn miss) and the
//                  token moves on.
//
// ----------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrarb/errors.hpp"

namespace rrarb {

enum class Policy { kSkipScan, kTokenRotate };

inline std::string to_string(Policy p) {
  return p == Policy::kSkipScan ? "skipscan" : "tokenrotate";
}

/// Static arbiter parameters. `time_slice` is the maximum number of
/// consecutive cycles a grantee may hold the bus; disengaged means the
/// grant is held until the request drops.
struct ArbiterConfig {
  std::size_t num_ports = 6;
  std::optional<std::uint64_t> time_slice = 1;  // nullopt = unlimited
  Policy policy = Policy::kSkipScan;
};

/// Per-cycle request sample: bit i is true iff device i wants the bus.
using RequestVector = std::vector<bool>;

inline bool any_request(const RequestVector& requests) {
  for (bool b : requests)
    if (b) return true;
  return false;
}

/// One-hot-or-zero grant lines. At most one bit can ever be set; the
/// representation stores the granted port directly so the invariant
/// holds by construction.
class GrantVector {
 public:
  GrantVector() = default;

  static GrantVector none(std::size_t num_ports) {
    return GrantVector(num_ports, std::nullopt);
  }
  static GrantVector one_hot(std::size_t num_ports, std::size_t port) {
    if (port >= num_ports)
      throw DimensionError("grant port " + std::to_string(port) +
                           " out of range for " + std::to_string(num_ports) +
                           " ports");
    return GrantVector(num_ports, port);
  }

  std::size_t size() const { return num_ports_; }
  bool any() const { return port_.has_value(); }
  std::optional<std::size_t> port() const { return port_; }
  bool bit(std::size_t i) const { return port_.has_value() && *port_ == i; }

  std::vector<bool> bits() const {
    std::vector<bool> out(num_ports_, false);
    if (port_) out[*port_] = true;
    return out;
  }

  friend bool operator==(const GrantVector&, const GrantVector&) = default;

 private:
  GrantVector(std::size_t n, std::optional<std::size_t> p)
      : num_ports_(n), port_(p) {}

  std::size_t num_ports_ = 0;
  std::optional<std::size_t> port_;
};

enum class Fsm { kIdle, kGranted };

/// Register contents between clock edges.
///
/// `token_index` is the rotation pointer. In TokenRotate mode it is the
/// owner of the current slot (a registered one-hot token). In
/// SkipScan mode it is where the next cyclic search starts; it advances
/// to grantee+1 at the moment a fresh grant is issued, so the grantee
/// drops to lowest priority for the following arbitration.
///
/// `slice_remaining` is engaged only while granted under a bounded
/// slice and counts the cycles the grantee may still hold after the
/// current one; it reaches 0 on the grantee's last permitted cycle.
struct ArbiterState {
  std::size_t token_index = 0;
  Fsm fsm = Fsm::kIdle;
  std::size_t grantee = 0;  // meaningful only when fsm == kGranted
  std::optional<std::uint64_t> slice_remaining;
  std::uint64_t cycle_count = 0;
};

enum class EventKind {
  kNone,
  kTurnHit,            // fresh grant: token and request line up
  kTurnMiss,           // TokenRotate slot wasted: owner not requesting
  kSliceExpired,       // grantee used up its whole slice
  kReleasedByRequest,  // grantee dropped its request early
};

inline std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::kNone: return "none";
    case EventKind::kTurnHit: return "turn_hit";
    case EventKind::kTurnMiss: return "turn_miss";
    case EventKind::kSliceExpired: return "slice_expired";
    case EventKind::kReleasedByRequest: return "released_by_request";
  }
  return "?";
}

/// At most one event is reported per cycle. When a termination
/// (expiry/release) coincides with a fresh selection, the termination
/// wins the slot; the new grantee is still visible in `grant`.
struct StepEvent {
  EventKind kind = EventKind::kNone;
  std::size_t port = 0;  // meaningful unless kind == kNone

  friend bool operator==(const StepEvent&, const StepEvent&) = default;
};

struct StepOutput {
  GrantVector grant;
  StepEvent event;

  friend bool operator==(const StepOutput&, const StepOutput&) = default;
};

struct StepResult {
  ArbiterState state;
  StepOutput output;
};

/// Per-port acknowledgement: ack = token AND request. true classifies
/// as a turn hit (access permitted), false as a turn miss (access
/// denied).
inline bool compute_ack(bool token, bool request) { return token && request; }

inline void validate(const ArbiterConfig& cfg) {
  if (cfg.num_ports == 0)
    throw ConfigError("num_ports must be >= 1");
  if (cfg.time_slice.has_value() && *cfg.time_slice == 0)
    throw ConfigError("time_slice must be >= 1 cycles (or unlimited)");
}

/// Validates the configuration and returns the power-on state:
/// token at port 0, FSM idle, cycle counter zero.
inline ArbiterState new_arbiter(const ArbiterConfig& cfg) {
  validate(cfg);
  return ArbiterState{};
}

/// Advances the arbiter by one clock cycle.
///
/// Cycle contract, in order:
///  - reset=1 dominates: idle, token back to 0, no grant.
///  - A grantee whose slice has run out terminates (SliceExpired) even
///    if its request also dropped this cycle; one whose request dropped
///    terminates early (ReleasedByRequest). Otherwise the grant holds.
///  - After a termination, or from idle, a fresh selection runs in the
///    same cycle -- except a TokenRotate release, where the next slot
///    only begins on the following edge.
///  - SkipScan selection: first requester cyclically from token_index;
///    the pointer is frozen when nothing is requesting.
///    TokenRotate selection: the slot owner gets the grant iff it is
///    requesting; otherwise the slot is a TurnMiss and the token moves
///    one position for the next cycle.
inline StepResult step(const ArbiterConfig& cfg, const ArbiterState& prev,
                       const RequestVector& requests, bool reset = false) {
  const std::size_t n = cfg.num_ports;
  if (requests.size() != n)
    throw DimensionError("request vector has " +
                         std::to_string(requests.size()) + " bits, expected " +
                         std::to_string(n));
  if (prev.token_index >= n ||
      (prev.fsm == Fsm::kGranted && prev.grantee >= n))
    throw DimensionError("state indexes a port outside [0, " +
                         std::to_string(n) + ")");

  ArbiterState next = prev;
  next.cycle_count = prev.cycle_count + 1;
  GrantVector grant = GrantVector::none(n);
  StepEvent event{};

  if (reset) {
    next.token_index = 0;
    next.fsm = Fsm::kIdle;
    next.grantee = 0;
    next.slice_remaining.reset();
    return {next, {grant, event}};
  }

  bool arbitrate = (prev.fsm == Fsm::kIdle);

  if (prev.fsm == Fsm::kGranted) {
    const std::size_t p = prev.grantee;
    if (next.slice_remaining.has_value() && *next.slice_remaining == 0) {
      // Slice ran out; the slot ends regardless of the request line.
      event = {EventKind::kSliceExpired, p};
      if (cfg.policy == Policy::kTokenRotate)
        next.token_index = (p + 1) % n;
      next.fsm = Fsm::kIdle;
      next.slice_remaining.reset();
      arbitrate = true;
    } else if (!requests[p]) {
      // Early termination by request drop.
      event = {EventKind::kReleasedByRequest, p};
      next.fsm = Fsm::kIdle;
      next.slice_remaining.reset();
      if (cfg.policy == Policy::kTokenRotate) {
        next.token_index = (p + 1) % n;
        arbitrate = false;  // strict slot model: regrant next cycle
      } else {
        arbitrate = true;  // no dead cycle
      }
    } else {
      // Hold the grant.
      grant = GrantVector::one_hot(n, p);
      if (next.slice_remaining) --*next.slice_remaining;
      return {next, {grant, event}};
    }
  }

  if (arbitrate) {
    if (cfg.policy == Policy::kSkipScan) {
      std::optional<std::size_t> hit;
      for (std::size_t off = 0; off < n; ++off) {
        const std::size_t cand = (next.token_index + off) % n;
        if (requests[cand]) {
          hit = cand;
          break;
        }
      }
      if (hit) {
        grant = GrantVector::one_hot(n, *hit);
        next.fsm = Fsm::kGranted;
        next.grantee = *hit;
        next.slice_remaining =
            cfg.time_slice ? std::optional<std::uint64_t>(*cfg.time_slice - 1)
                           : std::nullopt;
        next.token_index = (*hit + 1) % n;
        if (event.kind == EventKind::kNone)
          event = {EventKind::kTurnHit, *hit};
      }
      // else: idle, pointer frozen
    } else {  // TokenRotate
      const std::size_t t = next.token_index;
      if (requests[t]) {
        grant = GrantVector::one_hot(n, t);
        next.fsm = Fsm::kGranted;
        next.grantee = t;
        next.slice_remaining =
            cfg.time_slice ? std::optional<std::uint64_t>(*cfg.time_slice - 1)
                           : std::nullopt;
        if (event.kind == EventKind::kNone)
          event = {EventKind::kTurnHit, t};
      } else {
        if (event.kind == EventKind::kNone)
          event = {EventKind::kTurnMiss, t};
        next.token_index = (t + 1) % n;
      }
    }
  }

  return {next, {grant, event}};
}

/// One cycle worth of stimulus for `run`.
struct CycleInput {
  bool reset = false;
  RequestVector requests;
};

/// Batch driver: folds `step` over a stimulus sequence, one output per
/// input cycle. The state argument is advanced in place. A mis-sized
/// request vector raises a dimension error naming the offending cycle.
inline std::vector<StepOutput> run(const ArbiterConfig& cfg,
                                   ArbiterState& state,
                                   std::span<const CycleInput> trace) {
  std::vector<StepOutput> outputs;
  outputs.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].requests.size() != cfg.num_ports)
      throw DimensionError(
          "cycle " + std::to_string(i) + ": request vector has " +
          std::to_string(trace[i].requests.size()) + " bits, expected " +
          std::to_string(cfg.num_ports));
    StepResult r = step(cfg, state, trace[i].requests, trace[i].reset);
    state = r.state;
    outputs.push_back(std::move(r.output));
  }
  return outputs;
}

}  // namespace rrarb
