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
//  workload: request-trace generation and CSV round-trip
//
//  Trace CSV schema (bit-exact):
//      cycle,reset,req0,req1,...,req{N-1}
//  one row per cycle, cycle numbers 0,1,2,... with no gaps, all other
//  fields literally 0 or 1, UTF-8, LF line endings.
//
//  Randomness is produced by splitmix64 substreams, one per port, all
//  derived from the workload seed. That generator is part of the
//  contract: the same (spec, num_ports) yields the same trace on every
//  platform.
//
// ----------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rrarb/arbiter.hpp"
#include "rrarb/errors.hpp"

namespace rrarb {

/// One sampled cycle of stimulus as stored in trace files.
struct TraceRecord {
  std::uint64_t cycle = 0;
  bool reset = false;
  RequestVector requests;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class WorkloadKind { kSaturated, kBernoulli, kOnOff, kExplicit };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kSaturated;
  double request_probability = 0.5;       // Bernoulli: per port, per cycle
  std::uint64_t burst_len = 1;            // OnOff: cycles on
  std::uint64_t idle_len = 1;             // OnOff: cycles off
  std::filesystem::path trace_path;       // Explicit
  std::uint64_t length = 0;               // cycles (ignored for Explicit)
  std::uint64_t seed = 0;
};

/// splitmix64 (Steele, Lea, Flood): tiny, fast, and fully pinned here so
/// generated traces are reproducible independent of any standard-library
/// distribution details.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 bits of entropy.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline void validate(const WorkloadSpec& spec) {
  switch (spec.kind) {
    case WorkloadKind::kBernoulli:
      if (!(spec.request_probability >= 0.0 &&
            spec.request_probability <= 1.0))
        throw ConfigError("request probability must lie in [0,1]");
      break;
    case WorkloadKind::kOnOff:
      if (spec.burst_len == 0 || spec.idle_len == 0)
        throw ConfigError("burst and idle lengths must be >= 1");
      break;
    default:
      break;
  }
}

inline std::vector<TraceRecord> read_trace(std::istream& in);
inline std::vector<TraceRecord> read_trace(const std::filesystem::path& path);

/// Deterministically expands a workload spec into a request trace.
/// Synthetic kinds emit `spec.length` records with reset=0; Explicit
/// loads the referenced CSV as-is and checks its width.
inline std::vector<TraceRecord> generate(const WorkloadSpec& spec,
                                         std::size_t num_ports) {
  validate(spec);

  if (spec.kind == WorkloadKind::kExplicit) {
    std::vector<TraceRecord> records = read_trace(spec.trace_path);
    for (const TraceRecord& rec : records) {
      if (rec.requests.size() != num_ports)
        throw DimensionError("trace is " +
                             std::to_string(rec.requests.size()) +
                             " ports wide, expected " +
                             std::to_string(num_ports));
    }
    return records;
  }

  // One substream per port, all derived from the spec seed.
  SplitMix64 root(spec.seed);
  std::vector<SplitMix64> port_rng;
  std::vector<std::uint64_t> onoff_phase;
  port_rng.reserve(num_ports);
  for (std::size_t p = 0; p < num_ports; ++p)
    port_rng.emplace_back(root.next());
  if (spec.kind == WorkloadKind::kOnOff) {
    const std::uint64_t period = spec.burst_len + spec.idle_len;
    for (std::size_t p = 0; p < num_ports; ++p)
      onoff_phase.push_back(port_rng[p].next() % period);
  }

  std::vector<TraceRecord> records;
  records.reserve(spec.length);
  for (std::uint64_t c = 0; c < spec.length; ++c) {
    TraceRecord rec;
    rec.cycle = c;
    rec.reset = false;
    rec.requests.resize(num_ports);
    for (std::size_t p = 0; p < num_ports; ++p) {
      switch (spec.kind) {
        case WorkloadKind::kSaturated:
          rec.requests[p] = true;
          break;
        case WorkloadKind::kBernoulli:
          rec.requests[p] = port_rng[p].next_unit() < spec.request_probability;
          break;
        case WorkloadKind::kOnOff: {
          const std::uint64_t period = spec.burst_len + spec.idle_len;
          rec.requests[p] = (c + onoff_phase[p]) % period < spec.burst_len;
          break;
        }
        case WorkloadKind::kExplicit:
          break;  // handled above
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline void write_trace(std::span<const TraceRecord> records,
                        std::ostream& out) {
  const std::size_t n = records.empty() ? 0 : records.front().requests.size();
  out << "cycle,reset";
  for (std::size_t p = 0; p < n; ++p) out << ",req" << p;
  out << '\n';
  for (const TraceRecord& rec : records) {
    out << rec.cycle << ',' << (rec.reset ? '1' : '0');
    for (std::size_t p = 0; p < n; ++p)
      out << ',' << (rec.requests[p] ? '1' : '0');
    out << '\n';
  }
}

inline void write_trace(std::span<const TraceRecord> records,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out)
    throw TraceParseError(0, "cannot open " + path.string() + " for writing");
  write_trace(records, out);
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline bool parse_bit(const std::string& field, std::size_t line_no,
                      const char* what) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw TraceParseError(line_no, std::string(what) + " field must be 0 or 1, got \"" +
                                     field + "\"");
}

}  // namespace detail

/// Parses a trace CSV. Structural problems (bad header, bad field
/// values, cycle numbering) raise TraceParseError with the offending
/// line; a row with the wrong number of columns raises DimensionError.
inline std::vector<TraceRecord> read_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&](std::string& out_line) -> bool {
    if (!std::getline(in, out_line)) return false;
    ++line_no;
    if (!out_line.empty() && out_line.back() == '\r') out_line.pop_back();
    return true;
  };

  if (!next_line(line))
    throw TraceParseError(1, "empty file: missing header row");

  const std::vector<std::string> header = detail::split_csv(line);
  if (header.size() < 2 || header[0] != "cycle" || header[1] != "reset")
    throw TraceParseError(1, "header must start with cycle,reset");
  const std::size_t num_ports = header.size() - 2;
  for (std::size_t p = 0; p < num_ports; ++p) {
    if (header[p + 2] != "req" + std::to_string(p))
      throw TraceParseError(1, "expected column req" + std::to_string(p) +
                                   ", got \"" + header[p + 2] + "\"");
  }

  std::vector<TraceRecord> records;
  while (next_line(line)) {
    const std::vector<std::string> fields = detail::split_csv(line);
    if (fields.size() != num_ports + 2)
      throw DimensionError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(num_ports + 2) + " columns, got " +
                           std::to_string(fields.size()));

    TraceRecord rec;
    if (fields[0].empty() ||
        fields[0].find_first_not_of("0123456789") != std::string::npos)
      throw TraceParseError(line_no,
                            "cycle field must be a decimal integer, got \"" +
                                fields[0] + "\"");
    rec.cycle = std::stoull(fields[0]);
    if (rec.cycle != records.size())
      throw TraceParseError(line_no, "cycle numbers must be 0,1,2,... got " +
                                         fields[0] + " at row " +
                                         std::to_string(records.size()));
    rec.reset = detail::parse_bit(fields[1], line_no, "reset");
    rec.requests.resize(num_ports);
    for (std::size_t p = 0; p < num_ports; ++p)
      rec.requests[p] = detail::parse_bit(fields[p + 2], line_no, "request");
    records.push_back(std::move(rec));
  }
  return records;
}

inline std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw TraceParseError(0, "cannot open " + path.string());
  return read_trace(in);
}

/// Runs a fresh arbiter over a trace and returns the per-cycle outputs.
inline std::vector<StepOutput> simulate(const ArbiterConfig& cfg,
                                        std::span<const TraceRecord> trace) {
  ArbiterState state = new_arbiter(cfg);
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
