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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace molcirc {

/// Largest atomic number handled by the core/valence counting rules.
inline constexpr int kMaxAtomicNumber = 17;

struct Atom {
  std::string symbol;
  int atomic_number = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // Angstrom

  /// Builds an atom from its element symbol ("H", "He", ... "Cl").
  static Atom from_symbol(std::string_view symbol, const Eigen::Vector3d& position);
};

int atomic_number_from_symbol(std::string_view symbol);
std::string_view element_symbol(int atomic_number);

/// Electrons in the closed shells of the preceding noble gas.
int core_electrons(int atomic_number);
/// Connectors an atom contributes to a chemical graph.
int valence_electrons(int atomic_number);

using Edge = std::pair<std::size_t, std::size_t>;

/// Lewis-structure abstraction of a molecule. Each edge is one bonding
/// electron pair; a repeated edge is a multiple bond. Each entry of
/// `lone_pairs` is a loop on that vertex consuming two connectors.
struct ChemicalGraph {
  std::vector<Atom> atoms;
  std::vector<Edge> edges;
  std::vector<std::size_t> lone_pairs;
  std::string label;

  /// Sum over edges of the inverse bond length (1/Angstrom).
  double score() const;
};

struct ConnectorViolation {
  std::size_t atom;
  int expected;
  int found;

  bool operator==(const ConnectorViolation&) const = default;
};

/// Empty result means every atom's connectors are consumed exactly.
/// Throws InputError on out-of-range or self-loop edges.
std::vector<ConnectorViolation> validate_graph(const ChemicalGraph& graph);

/// Stable sort by descending score(). All graphs must share one atom list.
std::vector<ChemicalGraph> rank_graphs(std::vector<ChemicalGraph> graphs);

struct GraphConfig {
  std::vector<Atom> atoms;
  std::vector<ChemicalGraph> graphs;
};

/// Reads {"atoms":[{"symbol","xyz"}], "graphs":[{"label","edges","lone_pairs"}]}.
GraphConfig parse_graph_config(const nlohmann::json& doc);

std::vector<Atom> parse_atoms(const nlohmann::json& atoms);
/// One {"label","edges","lone_pairs"} entry over the given atoms.
ChemicalGraph parse_graph(const nlohmann::json& entry, const std::vector<Atom>& atoms);

}  // namespace molcirc
