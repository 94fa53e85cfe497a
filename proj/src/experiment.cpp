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

#include "molcirc/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "molcirc/errors.hpp"
#include "molcirc/fci.hpp"

namespace molcirc {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

template <typename F>
auto in_stage(const std::string& stage, F&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError("stage " + stage + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError("stage " + stage + ": " + e.what());
  }
}

std::string formula(const std::vector<Atom>& atoms) {
  std::vector<std::pair<std::string, int>> counts;
  for (const auto& a : atoms) {
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == a.symbol; });
    if (it == counts.end()) {
      counts.emplace_back(a.symbol, 1);
    } else {
      ++it->second;
    }
  }
  std::string out;
  for (const auto& [s, n] : counts) out += n == 1 ? s : s + std::to_string(n);
  return out;
}

Motif parse_motif(const json& j, std::size_t index) {
  Motif m;
  const std::string tag = std::to_string(index + 1);
  for (const auto& r : j.value("rotators", json::array())) {
    if (!r.is_array() || r.size() < 2 || r.size() > 3) throw InputError("motif rotators are [i, j, guess]");
    const auto i = r[0].get<std::size_t>();
    const auto k = r[1].get<std::size_t>();
    m.rotators.push_back({i, k, "r" + tag + "_" + std::to_string(i) + "_" + std::to_string(k),
                          r.size() == 3 ? r[2].get<double>() : 0.0});
  }
  for (const auto& c : j.value("correlators", json::array())) {
    if (!c.is_array() || c.size() != 2) throw InputError("motif correlators are [i, j]");
    const auto i = c[0].get<std::size_t>();
    const auto k = c[1].get<std::size_t>();
    m.correlators.push_back({i, k, "c" + tag + "_" + std::to_string(i) + "_" + std::to_string(k)});
  }
  return m;
}

void parse_optimizer(const json& j, OrbitalOptOptions& o) {
  static const std::set<std::string> keys{"max_iterations", "energy_tol", "gradient_tol", "gradient",
                                          "fd_step", "max_outer", "outer_tol"};
  for (const auto& [k, v] : j.items())
    if (!keys.contains(k)) throw InputError("unknown optimizer key '" + k + "'");
  auto& inner = o.inner.optimizer;
  inner.max_iterations = j.value("max_iterations", inner.max_iterations);
  inner.energy_tol = j.value("energy_tol", inner.energy_tol);
  inner.gradient_tol = j.value("gradient_tol", inner.gradient_tol);
  o.inner.fd_step = j.value("fd_step", o.inner.fd_step);
  o.max_outer = j.value("max_outer", o.max_outer);
  o.outer_tol = j.value("outer_tol", o.outer_tol);
  if (j.contains("gradient")) {
    const auto g = lower(j.at("gradient").get<std::string>());
    if (g == "parameter-shift") {
      o.inner.gradient = GradientMethod::ParameterShift;
    } else if (g == "finite-difference") {
      o.inner.gradient = GradientMethod::FiniteDifference;
    } else {
      throw InputError("gradient must be parameter-shift or finite-difference");
    }
  }
  if (inner.max_iterations < 0 || o.max_outer < 1) throw InputError("iteration limits must be positive");
  if (!(inner.energy_tol > 0) || !(inner.gradient_tol > 0) || !(o.outer_tol > 0) || !(o.inner.fd_step > 0))
    throw InputError("optimizer tolerances must be positive");
}

std::vector<Atom> geometry_atoms(const ExperimentConfig& c) {
  if (c.chain) return chain_atoms(*c.chain);
  return c.atoms;
}

std::uint64_t parse_initial_state(const std::string& ket, std::size_t n_orbitals, int n_electrons,
                                  int two_sz) {
  if (ket.size() != 2 * n_orbitals)
    throw InputError("initial_state needs " + std::to_string(2 * n_orbitals) + " occupation digits");
  int up = 0;
  int down = 0;
  for (std::size_t q = 0; q < ket.size(); ++q) {
    if (ket[q] != '0' && ket[q] != '1') throw InputError("initial_state must contain only 0 and 1");
    if (ket[q] == '1') ++(q % 2 == 0 ? up : down);
  }
  if (up + down != n_electrons || up - down != two_sz)
    throw InputError("initial_state does not match the electron count and spin");
  return basis_index(ket);
}

/// Orbital frame the circuits act in, with its FCI reference for fidelities.
struct Frame {
  MolecularIntegrals ints;
  FciResult fci;
  std::shared_ptr<const Observable> observable;
};

Frame make_frame(MolecularIntegrals ints, const ExperimentConfig& config) {
  Frame f;
  f.fci = fci_ground_state(ints, ints.n_electrons, ints.two_sz, config.max_qubits);
  f.observable = std::make_shared<FockObservable>(ints, config.max_qubits);
  f.ints = std::move(ints);
  return f;
}

StageReport make_stage(const std::string& name, const Circuit& c, std::span<const double> params,
                       double energy, const Frame& frame, const StateVector& initial,
                       double e_ref) {
  StageReport s;
  s.ansatz = name;
  s.energy = energy;
  s.error_mha = error_millihartree(energy, e_ref);
  if (!frame.fci.states.empty()) s.fidelity = fidelity(simulate(c, params, initial), frame.fci.states);
  const auto m = metrics(c);
  s.n_params = m.n_parameters;
  s.cnots = m.cnot_count;
  s.depth = m.depth;
  for (std::size_t k = 0; k < params.size(); ++k) s.parameters[c.parameter_names()[k]] = params[k];
  return s;
}

/// Re-optimizes an extended circuit from the previous optimum and records the stage.
struct Pipeline {
  const ExperimentConfig& config;
  const Frame& frame;
  StateVector initial;
  double e_ref;
  Circuit circuit;
  std::vector<double> params;
  int inner = 0;

  StageReport optimize(const std::string& name, Circuit next) {
    std::vector<double> x0 = next.initial_values();
    std::copy(params.begin(), params.end(), x0.begin());
    const VqeResult r = vqe_minimize(next, frame.observable, x0, initial, config.optimizer.inner);
    circuit = std::move(next);
    params = r.parameters;
    inner += r.iterations;
    StageReport s = make_stage(name, circuit, params, r.energy, frame, initial, e_ref);
    s.inner_iters = inner;
    s.trace = r.trace;
    return s;
  }
};

std::string fixed(double v, int digits) {
  const double scale = std::pow(10.0, digits);
  if (std::abs(v) * scale < 0.5) v = 0.0;
  return fmt::format("{:.{}f}", v, digits);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

AnsatzKind parse_ansatz(const std::string& name) {
  const auto n = lower(name);
  if (n == "spa") return AnsatzKind::Spa;
  if (n == "spa+") return AnsatzKind::SpaPlus;
  if (n == "spa+x") return AnsatzKind::SpaPlusX;
  if (n == "multigraph") return AnsatzKind::MultiGraph;
  if (n == "custom") return AnsatzKind::Custom;
  throw InputError("unknown ansatz '" + name + "' (SPA, SPA+, SPA+X, multigraph, custom)");
}

std::string ansatz_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::Spa: return "SPA";
    case AnsatzKind::SpaPlus: return "SPA+";
    case AnsatzKind::SpaPlusX: return "SPA+X";
    case AnsatzKind::MultiGraph: return "multigraph";
    case AnsatzKind::Custom: return "custom";
  }
  return "";
}

std::vector<Atom> chain_atoms(const ChainGeometry& chain) {
  if (chain.count == 0) throw InputError("chain needs at least one atom");
  if (!(chain.spacing > 0) || !std::isfinite(chain.spacing)) throw InputError("chain spacing must be positive");
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < chain.count; ++k)
    atoms.push_back(Atom::from_symbol(chain.symbol, {0.0, 0.0, chain.spacing * static_cast<double>(k)}));
  return atoms;
}

std::vector<double> ScanRange::values() const {
  if (!(step > 0) || !(stop >= start)) throw InputError("scan needs step > 0 and stop >= start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = start + step * static_cast<double>(k);
  return out;
}

void ExperimentConfig::check() const {
  const int sources = (!atoms.empty()) + chain.has_value() + fcidump.has_value();
  if (sources != 1) throw InputError("config needs exactly one of atoms, chain, fcidump");
  if (scan && !chain) throw InputError("scan requires a chain geometry");
  const bool spa_family = ansatz == AnsatzKind::Spa || ansatz == AnsatzKind::SpaPlus ||
                          ansatz == AnsatzKind::SpaPlusX;
  if (spa_family && initial_state) throw InputError("initial_state applies to multigraph and custom ansatzes");
  if (!initial_state && graphs.empty()) throw InputError("config lists no graphs");
  if (ansatz == AnsatzKind::SpaPlus && graphs.size() < 2) throw InputError("SPA+ needs a second graph");
  if (ansatz == AnsatzKind::MultiGraph && graphs.empty()) throw InputError("multigraph needs graphs");
  if (ansatz == AnsatzKind::Custom && motifs.empty()) throw InputError("custom ansatz needs motifs");
  if (ansatz != AnsatzKind::Custom && !motifs.empty()) throw InputError("motifs require the custom ansatz");
  if (rotators_per_graph < 1) throw InputError("rotators_per_graph must be at least 1");
  if (rr_layers < 1) throw InputError("rr_layers must be at least 1");
  if (max_qubits < 1 || max_qubits > 30) throw InputError("max_qubits must lie in [1, 30]");
  parse_report_format(format);
}

ExperimentConfig parse_experiment_config(const json& doc, const std::filesystem::path& base_dir) {
  static const std::set<std::string> keys{
      "system", "atoms", "chain", "fcidump", "graphs", "rank_graphs", "ansatz", "motifs",
      "rotators_per_graph", "rr_layers", "frozen", "initial_state", "n_electrons", "two_sz",
      "orbital_optimization", "optimizer", "max_qubits", "scan", "output", "format"};
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (!keys.contains(k)) throw InputError("unknown config key '" + k + "'");

  ExperimentConfig c;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    if (doc.contains("atoms")) c.atoms = parse_atoms(doc.at("atoms"));
    if (doc.contains("chain")) {
      const auto& ch = doc.at("chain");
      c.chain = ChainGeometry{ch.value("symbol", "H"), ch.at("count").get<std::size_t>(),
                              ch.at("spacing").get<double>()};
    }
    if (doc.contains("fcidump")) c.fcidump = resolve(doc.at("fcidump").get<std::string>());
    const auto atoms = c.chain ? chain_atoms(*c.chain) : c.atoms;
    for (const auto& g : doc.value("graphs", json::array())) c.graphs.push_back(parse_graph(g, atoms));
    c.rank_graphs = doc.value("rank_graphs", true);
    c.ansatz = parse_ansatz(doc.value("ansatz", "SPA"));
    const auto motifs = doc.value("motifs", json::array());
    for (std::size_t k = 0; k < motifs.size(); ++k) c.motifs.push_back(parse_motif(motifs[k], k));
    c.rotators_per_graph = doc.value("rotators_per_graph", std::size_t{1});
    c.rr_layers = doc.value("rr_layers", 3);
    c.frozen = doc.value("frozen", std::vector<std::size_t>{});
    if (doc.contains("initial_state")) c.initial_state = doc.at("initial_state").get<std::string>();
    if (doc.contains("n_electrons")) c.n_electrons = doc.at("n_electrons").get<int>();
    if (doc.contains("two_sz")) c.two_sz = doc.at("two_sz").get<int>();
    c.orbital_optimization = doc.value("orbital_optimization", true);
    if (doc.contains("optimizer")) parse_optimizer(doc.at("optimizer"), c.optimizer);
    c.max_qubits = doc.value("max_qubits", kDefaultMaxQubits);
    if (doc.contains("scan")) {
      const auto& s = doc.at("scan");
      c.scan = ScanRange{s.at("start").get<double>(), s.at("stop").get<double>(), s.at("step").get<double>()};
      c.scan->values();
    }
    if (doc.contains("output")) c.output = resolve(doc.at("output").get<std::string>());
    c.format = doc.value("format", "json");
    if (doc.contains("system")) {
      c.system = doc.at("system").get<std::string>();
    } else if (!atoms.empty()) {
      c.system = formula(atoms);
    } else {
      c.system = c.fcidump ? c.fcidump->stem().string() : "system";
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.check();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  return parse_experiment_config(doc, path.parent_path());
}

MolecularIntegrals build_integrals(const ExperimentConfig& config) {
  if ((!config.atoms.empty()) + config.chain.has_value() + config.fcidump.has_value() != 1)
    throw InputError("config needs exactly one of atoms, chain, fcidump");
  MolecularIntegrals ints;
  if (config.fcidump) {
    ints = read_fcidump(*config.fcidump);
  } else {
    const auto atoms = geometry_atoms(config);
    ints = compute_sto3g_integrals(atoms);
  }
  if (!config.frozen.empty()) ints = freeze_core(ints, config.frozen);
  if (config.n_electrons) ints.n_electrons = *config.n_electrons;
  if (config.two_sz) ints.two_sz = *config.two_sz;
  const int n = static_cast<int>(ints.n_orbitals());
  if (ints.n_electrons < 0 || ints.n_electrons > 2 * n) throw InputError("electron count outside the orbital space");
  if (std::abs(ints.two_sz) > ints.n_electrons || (ints.n_electrons + ints.two_sz) % 2 != 0)
    throw InputError("two_sz is inconsistent with the electron count");
  return ints;
}

Report run_experiment(const ExperimentConfig& config) {
  const auto ints = in_stage("integrals", [&] { return build_integrals(config); });
  return run_experiment(config, ints);
}

Report run_experiment(const ExperimentConfig& config, const MolecularIntegrals& ints) {
  config.check();
  const std::size_t n = ints.n_orbitals();
  const int n_qubits = static_cast<int>(2 * n);
  if (n_qubits > config.max_qubits)
    throw InputError(fmt::format("{} qubits exceed the cap of {}", n_qubits, config.max_qubits));

  Report rep;
  rep.system = config.system;
  rep.n_orbitals = n;
  rep.n_electrons = ints.n_electrons;
  rep.two_sz = ints.two_sz;

  const Frame base = in_stage("FCI", [&] { return make_frame(ints, config); });
  rep.fci_energy = base.fci.energy;
  rep.sector_dimension = base.fci.sector_dimension;
  const double e_ref = base.fci.energy;

  std::vector<ChemicalGraph> graphs = config.graphs;
  const auto atoms = geometry_atoms(config);
  if (!atoms.empty()) {
    for (auto& g : graphs) g.atoms = atoms;
    if (config.rank_graphs) graphs = rank_graphs(std::move(graphs));
  }

  const bool from_state = config.initial_state.has_value();
  std::optional<Frame> spa_frame;
  StateVector initial(n_qubits, 0, config.max_qubits);
  Circuit circuit(n_qubits);
  std::vector<double> params;
  int inner = 0;

  if (!from_state) {
    // Separable-pair reference on the first graph, orbitals optimized.
    const ChemicalGraph& g0 = graphs.front();
    in_stage("SPA", [&] {
      if (!atoms.empty()) {
        const auto violations = validate_graph(g0);
        if (!violations.empty()) {
          const auto& v = violations.front();
          throw InputError(fmt::format("graph '{}': atom {} expects {} connectors, found {}", g0.label, v.atom,
                                       v.expected, v.found));
        }
      }
      const auto assignment = EdgeAssignment::from_graph(g0);
      if (static_cast<int>(assignment.n_electrons()) != ints.n_electrons || ints.two_sz != 0)
        throw InputError("graph electron pairs do not match the closed-shell electron count");
      const SpaModel model(assignment, n);
      const std::vector<double> p0(model.n_parameters(), 0.0);
      const Eigen::MatrixXd guess = initial_orbital_guess(g0, n);
      StageReport s;
      double energy = 0.0;
      if (config.orbital_optimization) {
        const auto oo = optimize_orbitals(model, ints, guess, p0, config.optimizer);
        spa_frame = make_frame(oo.integrals, config);
        params = oo.parameters;
        energy = oo.energy;
        s.outer_iters = oo.outer_iterations;
        inner = oo.inner_iterations;
        for (std::size_t k = 0; k < oo.energy_trace.size(); ++k)
          s.trace.push_back({static_cast<int>(k), oo.energy_trace[k], 0.0});
      } else {
        spa_frame = make_frame(rotate_integrals(ints, guess), config);
        const auto r = model.minimize(spa_frame->ints, p0, config.optimizer.inner);
        params = r.parameters;
        energy = r.energy;
        inner = r.iterations;
        s.trace = r.trace;
      }
      circuit = build_spa(assignment, n);
      StageReport full = make_stage("SPA", circuit, params, energy, *spa_frame, initial, e_ref);
      full.inner_iters = inner;
      full.outer_iters = s.outer_iters;
      full.trace = std::move(s.trace);
      rep.stages.push_back(std::move(full));
    });
  } else {
    initial = StateVector(n_qubits, parse_initial_state(*config.initial_state, n, ints.n_electrons, ints.two_sz),
                               config.max_qubits);
  }
  const Frame& frame = spa_frame ? *spa_frame : base;
  rep.coefficients = frame.ints.coefficients;

  Pipeline p{config, frame, initial, e_ref, circuit, params, inner};
  const std::size_t first_motif_graph = from_state ? 0 : 1;
  switch (config.ansatz) {
    case AnsatzKind::Spa:
      break;
    case AnsatzKind::SpaPlus:
    case AnsatzKind::SpaPlusX: {
      const Circuit spa = p.circuit;
      const std::vector<double> spa_params = p.params;
      const int spa_inner = p.inner;
      if (graphs.size() > 1) {
        in_stage("SPA+", [&] {
          StageReport s;
          for (std::size_t k = 1; k < graphs.size(); ++k) {
            const Motif m = graph_transition_motif(graphs.front(), graphs[k], frame.ints.coefficients,
                                                   std::to_string(k));
            s = p.optimize("SPA+", build_motif(p.circuit, m));
          }
          s.outer_iters = rep.stages.front().outer_iters;
          rep.stages.push_back(std::move(s));
        });
      }
      if (config.ansatz == AnsatzKind::SpaPlusX) {
        in_stage("SPA+X", [&] {
          const auto& edges = graphs.front().edges;
          if (edges.size() != 2 || !graphs.front().lone_pairs.empty())
            throw InputError("SPA+X needs a first graph with exactly two bonds");
          const std::array<std::size_t, 4> quad{edges[0].first, edges[0].second, edges[1].first,
                                                edges[1].second};
          const auto rr0 = rr_initial_guess(frame.ints.coefficients, quad, config.rr_layers);
          p.circuit = spa;
          p.params = spa_params;
          p.inner = spa_inner;
          StageReport s = p.optimize("SPA+X", build_spa_plus_x(spa, n, quad, config.rr_layers, rr0));
          s.outer_iters = rep.stages.front().outer_iters;
          rep.stages.push_back(std::move(s));
        });
      }
      break;
    }
    case AnsatzKind::MultiGraph:
      for (std::size_t k = first_motif_graph; k < graphs.size(); ++k) {
        const std::string name =
            fmt::format("MG-g{}-r{}", k - first_motif_graph + 1, config.rotators_per_graph);
        in_stage(name, [&] {
          const Motif m = multigraph_motif(graphs[k], n, config.rotators_per_graph, std::to_string(k + 1));
          StageReport s = p.optimize(name, build_motif(p.circuit, m));
          if (!rep.stages.empty()) s.outer_iters = rep.stages.front().outer_iters;
          rep.stages.push_back(std::move(s));
        });
      }
      break;
    case AnsatzKind::Custom:
      for (std::size_t k = 0; k < config.motifs.size(); ++k) {
        const std::string name = fmt::format("custom-{}", k + 1);
        in_stage(name, [&] {
          StageReport s = p.optimize(name, build_motif(p.circuit, config.motifs[k]));
          if (!rep.stages.empty()) s.outer_iters = rep.stages.front().outer_iters;
          rep.stages.push_back(std::move(s));
        });
      }
      break;
  }
  return rep;
}

std::vector<Report> run_scan(const ExperimentConfig& config) {
  if (!config.scan || !config.chain) throw InputError("scan requires a chain geometry and a scan range");
  const auto values = config.scan->values();
  std::vector<Report> out(values.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < values.size(); start += workers) {
    std::vector<std::future<Report>> jobs;
    for (std::size_t k = start; k < std::min(values.size(), start + workers); ++k) {
      ExperimentConfig c = config;
      c.scan.reset();
      c.chain->spacing = values[k];
      c.system = fmt::format("{} R={:.3f}", config.system, values[k]);
      jobs.push_back(std::async(std::launch::async, [c = std::move(c)] { return run_experiment(c); }));
    }
    for (std::size_t k = 0; k < jobs.size(); ++k) out[start + k] = jobs[k].get();
  }
  return out;
}

ReportFormat parse_report_format(const std::string& name) {
  const auto n = lower(name);
  if (n == "json") return ReportFormat::Json;
  if (n == "csv") return ReportFormat::Csv;
  if (n == "table") return ReportFormat::Table;
  throw InputError("unknown format '" + name + "' (json, csv, table)");
}

json report_to_json(const Report& r) {
  json j;
  j["system"] = r.system;
  j["n_orbitals"] = r.n_orbitals;
  j["n_electrons"] = r.n_electrons;
  j["two_sz"] = r.two_sz;
  j["fci_energy"] = r.fci_energy;
  j["sector_dimension"] = r.sector_dimension;
  json rows = json::array();
  for (Eigen::Index i = 0; i < r.coefficients.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < r.coefficients.cols(); ++k) row.push_back(r.coefficients(i, k));
    rows.push_back(std::move(row));
  }
  j["coefficients"] = std::move(rows);
  json stages = json::array();
  for (const auto& s : r.stages) {
    json t = json::array();
    for (const auto& p : s.trace) t.push_back({p.iteration, p.energy, p.gradient_norm});
    stages.push_back({{"ansatz", s.ansatz},
                      {"energy", s.energy},
                      {"error_mha", s.error_mha},
                      {"fidelity", s.fidelity ? json(*s.fidelity) : json(nullptr)},
                      {"n_params", s.n_params},
                      {"cnots", s.cnots},
                      {"depth", s.depth},
                      {"inner_iters", s.inner_iters},
                      {"outer_iters", s.outer_iters},
                      {"parameters", s.parameters},
                      {"trace", std::move(t)}});
  }
  j["stages"] = std::move(stages);
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  try {
    r.system = j.at("system").get<std::string>();
    r.n_orbitals = j.at("n_orbitals").get<std::size_t>();
    r.n_electrons = j.at("n_electrons").get<int>();
    r.two_sz = j.at("two_sz").get<int>();
    r.fci_energy = j.at("fci_energy").get<double>();
    r.sector_dimension = j.at("sector_dimension").get<std::size_t>();
    const auto& rows = j.at("coefficients");
    const auto n_cols = rows.empty() ? 0 : rows.front().size();
    r.coefficients.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != n_cols) throw InputError("report coefficients are ragged");
      for (std::size_t k = 0; k < n_cols; ++k)
        r.coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
    }
    for (const auto& s : j.at("stages")) {
      StageReport st;
      st.ansatz = s.at("ansatz").get<std::string>();
      st.energy = s.at("energy").get<double>();
      st.error_mha = s.at("error_mha").get<double>();
      if (!s.at("fidelity").is_null()) st.fidelity = s.at("fidelity").get<double>();
      st.n_params = s.at("n_params").get<std::size_t>();
      st.cnots = s.at("cnots").get<std::size_t>();
      st.depth = s.at("depth").get<std::size_t>();
      st.inner_iters = s.at("inner_iters").get<int>();
      st.outer_iters = s.at("outer_iters").get<int>();
      st.parameters = s.at("parameters").get<std::map<std::string, double>>();
      for (const auto& p : s.value("trace", json::array()))
        st.trace.push_back({p.at(0).get<int>(), p.at(1).get<double>(), p.at(2).get<double>()});
      r.stages.push_back(std::move(st));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return r;
}

void emit_report(std::span<const Report> reports, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Json: {
      json all = json::array();
      for (const auto& r : reports) all.push_back(report_to_json(r));
      out << all.dump(2) << '\n';
      break;
    }
    case ReportFormat::Csv:
      out << "system,ansatz,energy_Ha,error_mHa,fidelity_pct,n_params,cnots,depth,inner_iters,outer_iters\n";
      for (const auto& r : reports)
        for (const auto& s : r.stages)
          out << csv_field(r.system) << ',' << csv_field(s.ansatz) << ',' << fixed(s.energy, 9) << ','
              << fixed(s.error_mha, 1) << ',' << (s.fidelity ? fixed(100.0 * *s.fidelity, 1) : "") << ','
              << s.n_params << ',' << s.cnots << ',' << s.depth << ',' << s.inner_iters << ','
              << s.outer_iters << '\n';
      break;
    case ReportFormat::Table:
      for (const auto& r : reports) {
        out << fmt::format("{}  ({} orbitals, {} electrons, 2Sz = {})  FCI {} Ha, sector dimension {}\n", r.system,
                           r.n_orbitals, r.n_electrons, r.two_sz, fixed(r.fci_energy, 9), r.sector_dimension);
        out << fmt::format("  {:<12} {:>14} {:>9} {:>7} {:>4} {:>6} {:>6} {:>6} {:>6}\n", "ansatz", "energy/Ha",
                           "err/mHa", "F/%", "Nv", "cnots", "depth", "iter", "outer");
        for (const auto& s : r.stages)
          out << fmt::format("  {:<12} {:>14} {:>9} {:>7} {:>4} {:>6} {:>6} {:>6} {:>6}\n", s.ansatz,
                             fixed(s.energy, 9), fixed(s.error_mha, 1),
                             s.fidelity ? fixed(100.0 * *s.fidelity, 1) : "-", s.n_params, s.cnots, s.depth,
                             s.inner_iters, s.outer_iters);
      }
      break;
  }
}

void emit_report(std::span<const Report> reports, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  emit_report(reports, format, out);
  if (!out) throw InputError("cannot write " + path.string());
}

}  // namespace molcirc
