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

#include "molcirc/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "molcirc/errors.hpp"

namespace molcirc {

namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber> kSymbols = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O", "F",
    "Ne", "Na", "Mg", "Al", "Si", "P",  "S",  "Cl"};

void check_atomic_number(int n) {
  if (n < 1 || n > kMaxAtomicNumber) {
    throw UnsupportedElementError("unsupported atomic number " + std::to_string(n) +
                                  " (supported range 1.." +
                                  std::to_string(kMaxAtomicNumber) + ")");
  }
}

}  // namespace

int atomic_number_from_symbol(std::string_view symbol) {
  auto it = std::find(kSymbols.begin(), kSymbols.end(), symbol);
  if (it == kSymbols.end()) {
    throw UnsupportedElementError("unsupported element '" + std::string(symbol) + "'");
  }
  return static_cast<int>(it - kSymbols.begin()) + 1;
}

std::string_view element_symbol(int atomic_number) {
  check_atomic_number(atomic_number);
  return kSymbols[atomic_number - 1];
}

Atom Atom::from_symbol(std::string_view symbol, const Eigen::Vector3d& position) {
  if (!position.allFinite()) {
    throw InputError("non-finite coordinates for atom " + std::string(symbol));
  }
  return Atom{std::string(symbol), atomic_number_from_symbol(symbol), position};
}

int core_electrons(int atomic_number) {
  check_atomic_number(atomic_number);
  if (atomic_number < 2) return 0;
  if (atomic_number < 10) return 2;
  return 10;
}

int valence_electrons(int atomic_number) {
  return atomic_number - core_electrons(atomic_number);
}

double ChemicalGraph::score() const {
  double total = 0.0;
  for (const auto& [a, b] : edges) {
    const double length = (atoms.at(a).position - atoms.at(b).position).norm();
    if (length < 1e-12) {
      throw InputError("graph '" + label + "' has a zero-length bond");
    }
    total += 1.0 / length;
  }
  return total;
}

std::vector<ConnectorViolation> validate_graph(const ChemicalGraph& graph) {
  const std::size_t n = graph.atoms.size();
  std::vector<int> found(n, 0);
  for (const auto& [a, b] : graph.edges) {
    if (a >= n || b >= n) {
      throw InputError("graph '" + graph.label + "': edge (" + std::to_string(a) + "," +
                       std::to_string(b) + ") references a missing atom");
    }
    if (a == b) {
      throw InputError("graph '" + graph.label +
                       "': self-loop edge; use lone_pairs for loops");
    }
    ++found[a];
    ++found[b];
  }
  for (std::size_t v : graph.lone_pairs) {
    if (v >= n) {
      throw InputError("graph '" + graph.label + "': lone pair on missing atom " +
                       std::to_string(v));
    }
    found[v] += 2;
  }

  std::vector<ConnectorViolation> violations;
  for (std::size_t i = 0; i < n; ++i) {
    const int expected = valence_electrons(graph.atoms[i].atomic_number);
    if (found[i] != expected) violations.push_back({i, expected, found[i]});
  }
  return violations;
}

std::vector<ChemicalGraph> rank_graphs(std::vector<ChemicalGraph> graphs) {
  for (std::size_t k = 1; k < graphs.size(); ++k) {
    const auto& ref = graphs.front().atoms;
    const auto& other = graphs[k].atoms;
    bool same = ref.size() == other.size();
    for (std::size_t i = 0; same && i < ref.size(); ++i) {
      same = ref[i].atomic_number == other[i].atomic_number &&
             (ref[i].position - other[i].position).norm() < 1e-12;
    }
    if (!same) {
      throw InputError("rank_graphs: graph '" + graphs[k].label +
                       "' has a different atom list");
    }
  }

  std::vector<double> scores(graphs.size());
  std::transform(graphs.begin(), graphs.end(), scores.begin(),
                 [](const ChemicalGraph& g) { return g.score(); });
  std::vector<std::size_t> order(graphs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<ChemicalGraph> ranked;
  ranked.reserve(graphs.size());
  for (std::size_t i : order) ranked.push_back(std::move(graphs[i]));
  return ranked;
}

std::vector<Atom> parse_atoms(const nlohmann::json& atoms) {
  std::vector<Atom> out;
  for (const auto& entry : atoms) {
    const auto& xyz = entry.at("xyz");
    if (!xyz.is_array() || xyz.size() != 3) {
      throw InputError("atom 'xyz' must be a 3-element array");
    }
    out.push_back(Atom::from_symbol(entry.at("symbol").get<std::string>(),
                                    {xyz[0].get<double>(), xyz[1].get<double>(),
                                     xyz[2].get<double>()}));
  }
  return out;
}

ChemicalGraph parse_graph(const nlohmann::json& entry, const std::vector<Atom>& atoms) {
  ChemicalGraph g;
  try {
    g.atoms = atoms;
    g.label = entry.value("label", "");
    for (const auto& e : entry.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("graph edges must be [i, j] pairs");
      g.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    if (entry.contains("lone_pairs")) g.lone_pairs = entry.at("lone_pairs").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph: ") + e.what());
  }
  // Without atoms (FCIDUMP input) vertices are orbital indices, checked later.
  if (!atoms.empty()) {
    for (const auto& [a, b] : g.edges)
      if (a >= atoms.size() || b >= atoms.size() || a == b)
        throw InputError("graph '" + g.label + "': edge (" + std::to_string(a) + ", " + std::to_string(b) +
                         ") is not a pair of distinct atoms");
    for (std::size_t v : g.lone_pairs)
      if (v >= atoms.size()) throw InputError("graph '" + g.label + "': lone pair on missing atom");
  }
  return g;
}

GraphConfig parse_graph_config(const nlohmann::json& doc) {
  GraphConfig config;
  try {
    config.atoms = parse_atoms(doc.at("atoms"));
    if (doc.contains("graphs")) {
      for (const auto& entry : doc.at("graphs")) config.graphs.push_back(parse_graph(entry, config.atoms));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph config: ") + e.what());
  }
  return config;
}

}  // namespace molcirc
