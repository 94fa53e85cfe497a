// Copyright 2026 The molcirc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "molcirc/errors.hpp"
#include "molcirc/experiment.hpp"
#include "molcirc/fci.hpp"

namespace {

using namespace molcirc;

struct Options {
  std::string config;
  std::string fcidump;
  std::string output;
  std::string format;
  std::string trace;
  int max_qubits = 0;
  unsigned seed = 0;
};

void add_common(CLI::App* cmd, Options& o, bool config_required) {
  auto* cfg = cmd->add_option("--config", o.config, "experiment JSON")->check(CLI::ExistingFile);
  if (config_required) cfg->required();
  cmd->add_option("--fcidump", o.fcidump, "integrals in FCIDUMP format (replaces the config geometry)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", o.output, "output path (default stdout)");
  cmd->add_option("--format", o.format, "json, csv or table");
  cmd->add_option("--max-qubits", o.max_qubits, "statevector qubit cap")->check(CLI::Range(1, 30));
  cmd->add_option("--seed", o.seed, "reserved; all pipelines are deterministic");
}

ExperimentConfig resolve_config(const Options& o) {
  ExperimentConfig c;
  if (!o.config.empty()) {
    c = load_experiment_config(o.config);
  } else if (!o.fcidump.empty()) {
    c.system = std::filesystem::path(o.fcidump).stem().string();
  } else {
    throw InputError("pass --config or --fcidump");
  }
  if (!o.fcidump.empty()) {
    c.atoms.clear();
    c.chain.reset();
    c.scan.reset();
    c.fcidump = o.fcidump;
  }
  if (o.max_qubits > 0) c.max_qubits = o.max_qubits;
  if (!o.format.empty()) c.format = o.format;
  if (!o.output.empty()) c.output = o.output;
  return c;
}

void emit(std::span<const Report> reports, const ExperimentConfig& c) {
  const auto format = parse_report_format(c.format);
  if (c.output) {
    emit_report(reports, format, *c.output);
  } else {
    emit_report(reports, format, std::cout);
  }
}

int cmd_integrals(const Options& o) {
  ExperimentConfig c = resolve_config(o);
  const MolecularIntegrals ints = build_integrals(c);
  if (o.output.empty()) {
    write_fcidump(ints, std::cout);
  } else {
    std::ofstream out(o.output);
    if (!out) throw InputError("cannot write " + o.output);
    write_fcidump(ints, out);
  }
  return 0;
}

int cmd_fci(const Options& o) {
  ExperimentConfig c = resolve_config(o);
  const MolecularIntegrals ints = build_integrals(c);
  const FciResult fci = fci_ground_state(ints, ints.n_electrons, ints.two_sz, c.max_qubits);
  Report r;
  r.system = c.system;
  r.n_orbitals = ints.n_orbitals();
  r.n_electrons = ints.n_electrons;
  r.two_sz = ints.two_sz;
  r.fci_energy = fci.energy;
  r.sector_dimension = fci.sector_dimension;
  r.coefficients = ints.coefficients;
  StageReport s;
  s.ansatz = "FCI";
  s.energy = fci.energy;
  if (!fci.states.empty()) s.fidelity = 1.0;
  r.stages.push_back(s);
  emit(std::span<const Report>(&r, 1), c);
  return 0;
}

int cmd_run(const Options& o) {
  const ExperimentConfig c = resolve_config(o);
  const Report r = run_experiment(c);
  emit(std::span<const Report>(&r, 1), c);
  if (!o.trace.empty() && !r.stages.empty()) {
    std::ofstream out(o.trace);
    if (!out) throw InputError("cannot write " + o.trace);
    write_trace_csv(out, r.stages.back().trace);
  }
  return 0;
}

int cmd_scan(const Options& o) {
  const ExperimentConfig c = resolve_config(o);
  if (!c.scan) throw InputError("config has no scan range");
  const auto reports = run_scan(c);
  emit(reports, c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build, simulate and optimize molecular circuits from chemical graphs"};
  app.require_subcommand(1);
  Options o;

  auto* integrals = app.add_subcommand("integrals", "write the (frozen-core) integrals as FCIDUMP");
  add_common(integrals, o, false);
  auto* fci = app.add_subcommand("fci", "exact ground-state energy of the configured system");
  add_common(fci, o, false);
  auto* run = app.add_subcommand("run", "run an experiment: SPA, motif stages, FCI reference");
  add_common(run, o, true);
  run->add_option("--trace", o.trace, "CSV optimizer trace of the last stage");
  auto* scan = app.add_subcommand("scan", "run an experiment over a range of chain spacings");
  add_common(scan, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*integrals) return cmd_integrals(o);
    if (*fci) return cmd_fci(o);
    if (*run) return cmd_run(o);
    if (*scan) return cmd_scan(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
