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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "molcirc/builder.hpp"
#include "molcirc/graph.hpp"
#include "molcirc/integrals.hpp"
#include "molcirc/opt.hpp"
#include "molcirc/sim.hpp"

namespace molcirc {

enum class AnsatzKind { Spa, SpaPlus, SpaPlusX, MultiGraph, Custom };

AnsatzKind parse_ansatz(const std::string& name);
std::string ansatz_name(AnsatzKind kind);

/// Equally spaced atoms along z.
struct ChainGeometry {
  std::string symbol = "H";
  std::size_t count = 0;
  double spacing = 0.0;  // Angstrom
};

std::vector<Atom> chain_atoms(const ChainGeometry& chain);

/// Chain spacings from `start` to `stop` inclusive.
struct ScanRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  std::string system;

  // Exactly one geometry source.
  std::vector<Atom> atoms;
  std::optional<ChainGeometry> chain;
  std::optional<std::filesystem::path> fcidump;

  std::vector<ChemicalGraph> graphs;
  bool rank_graphs = true;

  AnsatzKind ansatz = AnsatzKind::Spa;
  std::vector<Motif> motifs;  // custom ansatz
  std::size_t rotators_per_graph = 1;
  int rr_layers = 3;

  std::vector<std::size_t> frozen;
  std::optional<std::string> initial_state;  // ket, qubit 0 first
  std::optional<int> n_electrons;
  std::optional<int> two_sz;

  bool orbital_optimization = true;
  OrbitalOptOptions optimizer;
  int max_qubits = kDefaultMaxQubits;

  std::optional<ScanRange> scan;
  std::optional<std::filesystem::path> output;
  std::string format = "json";

  /// Throws InputError on inconsistent settings.
  void check() const;
};

/// Relative paths (FCIDUMP, output) resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Integrals from the geometry source, frozen core folded in, electron
/// count and spin overrides applied.
MolecularIntegrals build_integrals(const ExperimentConfig& config);

struct StageReport {
  std::string ansatz;
  double energy = 0.0;
  double error_mha = 0.0;
  std::optional<double> fidelity;  // absent above the qubit cap
  std::size_t n_params = 0;
  std::size_t cnots = 0;
  std::size_t depth = 0;
  int inner_iters = 0;
  int outer_iters = 0;
  std::map<std::string, double> parameters;
  /// Inner optimizer trace; orbital-optimized SPA stages list one point per
  /// outer step with gradient_norm 0.
  std::vector<TracePoint> trace;
};

struct Report {
  std::string system;
  std::size_t n_orbitals = 0;
  int n_electrons = 0;
  int two_sz = 0;
  double fci_energy = 0.0;
  std::size_t sector_dimension = 0;
  /// Orbitals (rows over the orthonormal atomic basis) the circuits act on.
  Eigen::MatrixXd coefficients;
  std::vector<StageReport> stages;
};

/// Integrals, orbital guess, SPA with orbital optimization, motif stages
/// with warm-started re-optimization, FCI reference. Stage failures are
/// rethrown with the stage label prepended.
Report run_experiment(const ExperimentConfig& config);
Report run_experiment(const ExperimentConfig& config, const MolecularIntegrals& ints);

/// One report per chain spacing.
std::vector<Report> run_scan(const ExperimentConfig& config);

enum class ReportFormat { Json, Csv, Table };
ReportFormat parse_report_format(const std::string& name);

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// JSON emits an array of reports; CSV and table emit one row per stage.
void emit_report(std::span<const Report> reports, ReportFormat format, std::ostream& out);
/// Throws InputError if the file cannot be written.
void emit_report(std::span<const Report> reports, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace molcirc
