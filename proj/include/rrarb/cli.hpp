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
//  cli: the `rrarb` command-line front end.
//
//  Subcommands:
//    simulate - workload -> arbiter -> metrics, report as JSON
//    depth    - gate-level critical-path sweep, one JSON row per N
//    verify   - oracle-equivalence sweeps, counterexample on failure
//
//  Machine output (JSON/CSV) goes to the standard stream, everything
//  human-readable to the diagnostic stream. Exit codes: 0 success,
//  1 verify found a mismatch, 2 configuration error, 3 trace parse
//  error. Ports are numbered 0..N-1 everywhere.
//
// ----------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrarb/arbiter.hpp"
#include "rrarb/errors.hpp"
#include "rrarb/metrics.hpp"
#include "rrarb/netlist.hpp"
#include "rrarb/verify.hpp"
#include "rrarb/workload.hpp"

namespace rrarb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTraceParse = 3;

struct SimulateOptions {
  std::size_t ports = 6;
  bool ports_explicit = false;
  std::string policy = "skipscan";
  std::string slice = "1";
  std::string workload = "saturated";
  double probability = 0.5;
  std::uint64_t burst = 4;
  std::uint64_t idle = 4;
  std::uint64_t cycles = 1000;
  std::uint64_t seed = 0;
  std::string trace_path;
  std::string out_path;
  std::string grants_csv_path;
};

struct DepthOptions {
  std::vector<std::size_t> ports;
  std::string netlist_prefix;
};

struct VerifyOptions {
  std::size_t max_ports = 6;
  std::uint64_t seed = 0;
};

inline std::optional<std::uint64_t> parse_slice(const std::string& text) {
  if (text == "unlimited") return std::nullopt;
  std::size_t pos = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("--slice must be a positive integer or 'unlimited'");
  }
  if (pos != text.size() || value == 0)
    throw ConfigError("--slice must be a positive integer or 'unlimited'");
  return value;
}

inline Policy parse_policy(const std::string& text) {
  if (text == "skipscan") return Policy::kSkipScan;
  if (text == "tokenrotate") return Policy::kTokenRotate;
  throw ConfigError("--policy must be skipscan or tokenrotate");
}

inline void write_grants_csv(std::span<const StepOutput> outputs,
                             std::size_t num_ports, std::ostream& out) {
  out << "cycle";
  for (std::size_t p = 0; p < num_ports; ++p) out << ",gnt" << p;
  out << '\n';
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out << i;
    for (std::size_t p = 0; p < num_ports; ++p)
      out << ',' << (outputs[i].grant.bit(p) ? '1' : '0');
    out << '\n';
  }
}

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out,
                        std::ostream& err) {
  std::vector<TraceRecord> trace;
  std::size_t num_ports = opt.ports;

  if (!opt.trace_path.empty()) {
    try {
      trace = read_trace(std::filesystem::path(opt.trace_path));
    } catch (const TraceParseError& e) {
      err << "trace error: " << e.what() << '\n';
      return kExitTraceParse;
    } catch (const DimensionError& e) {
      err << "trace error: " << e.what() << '\n';
      return kExitTraceParse;
    }
    if (!trace.empty()) {
      const std::size_t width = trace.front().requests.size();
      if (opt.ports_explicit && width != num_ports) {
        err << "config error: trace is " << width << " ports wide but --ports "
            << num_ports << " was given\n";
        return kExitConfig;
      }
      num_ports = width;
    }
  }

  ArbiterConfig cfg;
  try {
    cfg.num_ports = num_ports;
    cfg.time_slice = parse_slice(opt.slice);
    cfg.policy = parse_policy(opt.policy);
    validate(cfg);

    if (opt.trace_path.empty()) {
      WorkloadSpec spec;
      if (opt.workload == "saturated") {
        spec.kind = WorkloadKind::kSaturated;
      } else if (opt.workload == "bernoulli") {
        spec.kind = WorkloadKind::kBernoulli;
      } else if (opt.workload == "onoff") {
        spec.kind = WorkloadKind::kOnOff;
      } else {
        throw ConfigError("--workload must be saturated, bernoulli or onoff");
      }
      spec.request_probability = opt.probability;
      spec.burst_len = opt.burst;
      spec.idle_len = opt.idle;
      spec.length = opt.cycles;
      spec.seed = opt.seed;
      trace = generate(spec, cfg.num_ports);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<StepOutput> outputs;
  try {
    outputs = simulate(cfg, trace);
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const SimReport report = analyze(trace, outputs);
  const std::string json_text = to_json(report).dump(2) + "\n";
  if (opt.out_path.empty()) {
    out << json_text;
  } else {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) {
      err << "config error: cannot open " << opt.out_path << " for writing\n";
      return kExitConfig;
    }
    f << json_text;
  }

  if (!opt.grants_csv_path.empty()) {
    std::ofstream f(opt.grants_csv_path, std::ios::binary);
    if (!f) {
      err << "config error: cannot open " << opt.grants_csv_path
          << " for writing\n";
      return kExitConfig;
    }
    write_grants_csv(outputs, cfg.num_ports, f);
  }

  err << "simulated " << trace.size() << " cycles, " << cfg.num_ports
      << " ports, policy " << to_string(cfg.policy) << '\n';
  return kExitOk;
}

inline int cmd_depth(const DepthOptions& opt, std::ostream& out,
                     std::ostream& err) {
  if (opt.ports.empty()) {
    err << "config error: --ports requires at least one port count\n";
    return kExitConfig;
  }
  for (std::size_t n : opt.ports) {
    if (n == 0) {
      err << "config error: port counts must be >= 1\n";
      return kExitConfig;
    }
  }

  for (std::size_t n : opt.ports) {
    const DepthRow row = depth_row(n);
    nlohmann::ordered_json j;
    j["n"] = row.n;
    j["chain_depth"] = row.chain_depth;
    j["tree_depth"] = row.tree_depth;
    out << j.dump() << '\n';

    if (!opt.netlist_prefix.empty()) {
      for (const char* shape : {"chain", "tree"}) {
        const std::string path = opt.netlist_prefix + "_" + shape + "_" +
                                 std::to_string(n) + ".txt";
        std::ofstream f(path, std::ios::binary);
        if (!f) {
          err << "config error: cannot open " << path << " for writing\n";
          return kExitConfig;
        }
        const ArbiterGateModel m =
            std::string(shape) == "chain" ? build_chain(n) : build_tree(n);
        write_netlist(m.graph, f);
      }
    }
  }
  return kExitOk;
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& /*out*/,
                      std::ostream& err) {
  if (opt.max_ports == 0) {
    err << "config error: --max-ports must be >= 1\n";
    return kExitConfig;
  }
  if (opt.max_ports > kVerifyPortLimit) {
    err << "config error: --max-ports " << opt.max_ports
        << " exceeds the exhaustive sweep limit of " << kVerifyPortLimit
        << '\n';
    return kExitConfig;
  }

  std::optional<VerifyCounterexample> cx = check_scan_equivalence(opt.max_ports);
  if (!cx) {
    err << "ok: scan-equivalence (N <= " << opt.max_ports
        << ", all tokens, all request vectors)\n";
    cx = check_fixed_priority_equivalence(opt.max_ports, 1000, 50, opt.seed);
  }
  if (!cx) {
    err << "ok: fixed-priority-equivalence (1000 random traces x 50 cycles "
           "per N)\n";
    cx = check_gate_equivalence(opt.max_ports);
  }
  if (!cx) {
    err << "ok: gate-equivalence (chain, tree vs cyclic-scan reference)\n";
    return kExitOk;
  }
  err << "counterexample: " << describe(*cx) << '\n';
  return kExitMismatch;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{
      "rrarb: reconfigurable N-port round-robin arbiter simulator\n"
      "(ports are numbered 0..N-1)"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "run a workload through the arbiter and report metrics");
  CLI::Option* ports_opt =
      sim_cmd->add_option("--ports", sim.ports, "number of ports (default 6)");
  sim_cmd->add_option("--policy", sim.policy, "skipscan|tokenrotate")
      ->check(CLI::IsMember({"skipscan", "tokenrotate"}));
  sim_cmd->add_option("--slice", sim.slice,
                      "time slice in cycles, or 'unlimited'");
  sim_cmd->add_option("--workload", sim.workload,
                      "saturated|bernoulli|onoff")
      ->check(CLI::IsMember({"saturated", "bernoulli", "onoff"}));
  sim_cmd->add_option("--p", sim.probability,
                      "bernoulli per-port request probability");
  sim_cmd->add_option("--burst", sim.burst, "onoff burst length (cycles)");
  sim_cmd->add_option("--idle", sim.idle, "onoff idle length (cycles)");
  sim_cmd->add_option("--cycles", sim.cycles, "trace length to generate");
  sim_cmd->add_option("--seed", sim.seed, "workload seed")
      ->envname("RR_ARBITER_SEED");
  sim_cmd->add_option("--trace", sim.trace_path,
                      "drive from a trace CSV instead of a generator");
  sim_cmd->add_option("--out", sim.out_path,
                      "write the report JSON here instead of stdout");
  sim_cmd->add_option("--grants-csv", sim.grants_csv_path,
                      "also write per-cycle grant lines as CSV");

  DepthOptions dep;
  CLI::App* dep_cmd = app.add_subcommand(
      "depth", "critical-path depth of the chain and tree grant logic");
  dep_cmd->add_option("--ports", dep.ports, "port counts, e.g. 4,6,8,10,12")
      ->delimiter(',');
  dep_cmd->add_option("--emit-netlist", dep.netlist_prefix,
                      "write text netlists as <prefix>_<shape>_<n>.txt");

  VerifyOptions ver;
  CLI::App* ver_cmd = app.add_subcommand(
      "verify", "exhaustive equivalence checks against the reference models");
  ver_cmd->add_option("--max-ports", ver.max_ports,
                      "largest port count to sweep (<= " +
                          std::to_string(kVerifyPortLimit) + ")");
  ver_cmd->add_option("--seed", ver.seed, "seed for the randomized traces")
      ->envname("RR_ARBITER_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  sim.ports_explicit = ports_opt->count() > 0;
  if (sim_cmd->parsed()) return cmd_simulate(sim, out, err);
  if (dep_cmd->parsed()) return cmd_depth(dep, out, err);
  if (ver_cmd->parsed()) return cmd_verify(ver, out, err);
  err << app.help();
  return kExitConfig;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rrarb::cli
