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
//  metrics: fairness, starvation and utilization statistics computed
//  from a (trace, step outputs) pair after a simulation.
//
// ----------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "rrarb/arbiter.hpp"
#include "rrarb/errors.hpp"
#include "rrarb/workload.hpp"

namespace rrarb {

/// Aggregated simulation statistics.
///
/// max_wait_per_port is the longest run of consecutive cycles a port
/// spent requesting without being granted; a run is measured from the
/// first ungranted requesting cycle up to (excluding) the cycle the
/// grant arrives, and also ends if the request drops or the trace ends.
///
/// Degenerate-input conventions, so the report is total: with no
/// grants at all jain_index is 1.0, and with no pending requests
/// utilization is 0.0.
struct SimReport {
  std::vector<std::uint64_t> grants_per_port;
  std::uint64_t turn_hits = 0;
  std::uint64_t turn_misses = 0;
  std::vector<std::uint64_t> max_wait_per_port;
  double utilization = 0.0;
  double jain_index = 1.0;
  std::uint64_t total_cycles = 0;
};

/// Jain's fairness index (sum x)^2 / (n * sum x^2); 1.0 when all
/// shares are equal (or by convention when there are no shares).
inline double jain_index(std::span<const std::uint64_t> shares) {
  if (shares.empty()) return 1.0;
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t s : shares) {
    sum += static_cast<double>(s);
    sum_sq += static_cast<double>(s) * static_cast<double>(s);
  }
  if (sum == 0.0) return 1.0;
  return (sum * sum) / (static_cast<double>(shares.size()) * sum_sq);
}

inline SimReport analyze(std::span<const TraceRecord> trace,
                         std::span<const StepOutput> outputs) {
  if (trace.size() != outputs.size())
    throw DimensionError("trace has " + std::to_string(trace.size()) +
                         " cycles but outputs has " +
                         std::to_string(outputs.size()));

  const std::size_t n = trace.empty() ? 0 : trace.front().requests.size();
  SimReport report;
  report.total_cycles = trace.size();
  report.grants_per_port.assign(n, 0);
  report.max_wait_per_port.assign(n, 0);

  std::vector<std::uint64_t> wait_run(n, 0);
  std::uint64_t pending_cycles = 0;
  std::uint64_t granted_cycles = 0;

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceRecord& rec = trace[i];
    const StepOutput& out = outputs[i];
    if (rec.requests.size() != n || out.grant.size() != n)
      throw DimensionError("cycle " + std::to_string(i) +
                           ": inconsistent port count");

    if (any_request(rec.requests)) ++pending_cycles;
    if (out.grant.any()) {
      ++granted_cycles;
      ++report.grants_per_port[*out.grant.port()];
    }
    switch (out.event.kind) {
      case EventKind::kTurnHit: ++report.turn_hits; break;
      case EventKind::kTurnMiss: ++report.turn_misses; break;
      default: break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (rec.requests[p] && !out.grant.bit(p)) {
        ++wait_run[p];
      } else {
        report.max_wait_per_port[p] =
            std::max(report.max_wait_per_port[p], wait_run[p]);
        wait_run[p] = 0;
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    report.max_wait_per_port[p] =
        std::max(report.max_wait_per_port[p], wait_run[p]);

  report.utilization =
      pending_cycles == 0
          ? 0.0
          : static_cast<double>(granted_cycles) /
                static_cast<double>(pending_cycles);
  report.jain_index = jain_index(report.grants_per_port);
  return report;
}

/// A maximal continuously-requesting, never-granted interval that ran
/// longer than the configured bound.
struct StarvationViolation {
  std::size_t port = 0;
  std::uint64_t start_cycle = 0;

  friend bool operator==(const StarvationViolation&,
                         const StarvationViolation&) = default;
};

/// Flags every maximal run of consecutive cycles in which a port kept
/// requesting, was never granted, and the run exceeded `bound` cycles.
/// Runs are closed by a grant, by the request dropping, or by the end
/// of the trace. Results are ordered by (start_cycle, port).
inline std::vector<StarvationViolation> starvation_check(
    std::span<const TraceRecord> trace, std::span<const StepOutput> outputs,
    std::uint64_t bound) {
  if (trace.size() != outputs.size())
    throw DimensionError("trace has " + std::to_string(trace.size()) +
                         " cycles but outputs has " +
                         std::to_string(outputs.size()));

  const std::size_t n = trace.empty() ? 0 : trace.front().requests.size();
  std::vector<std::uint64_t> run_len(n, 0);
  std::vector<std::uint64_t> run_start(n, 0);
  std::vector<StarvationViolation> violations;

  auto close_run = [&](std::size_t p) {
    if (run_len[p] > bound)
      violations.push_back({p, run_start[p]});
    run_len[p] = 0;
  };

  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      if (trace[i].requests[p] && !outputs[i].grant.bit(p)) {
        if (run_len[p] == 0) run_start[p] = i;
        ++run_len[p];
      } else {
        close_run(p);
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) close_run(p);

  std::sort(violations.begin(), violations.end(),
            [](const StarvationViolation& a, const StarvationViolation& b) {
              return a.start_cycle != b.start_cycle
                         ? a.start_cycle < b.start_cycle
                         : a.port < b.port;
            });
  return violations;
}

/// Flat JSON object with exactly the SimReport field names.
inline nlohmann::ordered_json to_json(const SimReport& report) {
  nlohmann::ordered_json j;
  j["grants_per_port"] = report.grants_per_port;
  j["turn_hits"] = report.turn_hits;
  j["turn_misses"] = report.turn_misses;
  j["max_wait_per_port"] = report.max_wait_per_port;
  j["utilization"] = report.utilization;
  j["jain_index"] = report.jain_index;
  j["total_cycles"] = report.total_cycles;
  return j;
}

}  // namespace rrarb
