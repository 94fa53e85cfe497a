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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "molcirc/circuit.hpp"
#include "molcirc/graph.hpp"
#include "molcirc/pauli.hpp"

namespace molcirc {

/// Spatial orbitals owned by each edge's electron pair. The first orbital of
/// an edge holds the pair in the reference determinant.
struct EdgeAssignment {
  std::vector<std::vector<std::size_t>> orbitals;

  /// Vertex k carries orbital k; edge (a, b) gets {a, b}.
  static EdgeAssignment from_graph(const ChemicalGraph& g);
  /// Throws InputError on empty, overlapping or out-of-range assignments.
  void check(std::size_t n_orbitals) const;
  std::size_t n_electrons() const { return 2 * orbitals.size(); }
};

/// Separable-pair circuit on 2 * n_orbitals qubits. Parameters are named
/// "<prefix>_<edge>_<k>".
Circuit build_spa(const EdgeAssignment& assignment, std::size_t n_orbitals,
                  const std::string& prefix = "t");
Circuit build_spa(const ChemicalGraph& g, std::size_t n_orbitals);

/// Appends exp(-i theta/2 G) for a sum of commuting Pauli strings with real
/// coefficients, theta being parameter `param`.
void append_exponential(Circuit& c, const PauliSum& generator, std::size_t param);

/// exp(-i phi/2 G) with the spin-summed single-excitation generator; it maps
/// a+_i -> cos(phi/2) a+_i - sin(phi/2) a+_j.
Circuit orbital_rotator(std::size_t n_orbitals, std::size_t i, std::size_t j,
                        const std::string& param, double initial = 0.0);
/// exp(-i theta/2 G) with the pair-double generator moving a pair from i to j.
Circuit pair_correlator(std::size_t n_orbitals, std::size_t i, std::size_t j,
                        const std::string& param);

struct MotifRotator {
  std::size_t i = 0;
  std::size_t j = 1;
  std::string param;
  double initial = 0.0;
};

struct MotifCorrelator {
  std::size_t i = 0;
  std::size_t j = 1;
  std::string param;
};

/// U_R, then correlators, then U_R^dagger (same symbols). Correlators start at 0.
struct Motif {
  std::vector<MotifRotator> rotators;
  std::vector<MotifCorrelator> correlators;
};

Circuit build_motif(const Circuit& base, const Motif& m);

/// Pair correlators on (q0,q1), (q2,q3), (q1,q2), (q0,q3), all starting at 0.
Circuit correlator_block_c4(std::size_t n_orbitals, const std::array<std::size_t, 4>& quad,
                            const std::string& prefix);
/// Brick wall of nearest-neighbour rotators over `orbitals` (chain order):
/// even layers pair (0,1),(2,3),..., odd layers (1,2),(3,4),...
Circuit rotator_block_rr(std::size_t n_orbitals, const std::vector<std::size_t>& orbitals,
                         int layers, const std::string& prefix,
                         std::span<const double> initial = {});
/// Orbital pairs of the brick wall in gate order.
std::vector<std::pair<std::size_t, std::size_t>> brick_wall_pairs(std::size_t n, int layers);

/// Bonding / antibonding combinations per edge (rows are orbitals over the
/// orthonormal atomic basis). Vertices outside edges keep their atomic orbital.
Eigen::MatrixXd initial_orbital_guess(const ChemicalGraph& g, std::size_t n_orbitals);

/// Rotator angle phi with R(i, j, phi) turning orbital i of `coefficients`
/// (rows are orbitals) back onto atomic orbital i.
double local_frame_angle(const Eigen::MatrixXd& coefficients, std::size_t i, std::size_t j);

/// Motif that moves from the frame of `base` to that of `graph` and correlates
/// each edge of `graph`: rotators undoing the local frame of base edges, then
/// bonding-frame rotators on the new edges.
Motif graph_transition_motif(const ChemicalGraph& base, const ChemicalGraph& graph,
                             const Eigen::MatrixXd& coefficients, const std::string& tag);

/// Motif for one graph with `n_rotators` rotators per edge: the edge pair
/// (initial pi/2) plus further orbital pairs ordered by distance, initial 0.
Motif multigraph_motif(const ChemicalGraph& graph, std::size_t n_orbitals, std::size_t n_rotators,
                       const std::string& tag);

/// SPA -> C4 -> RR -> C4 -> RR^dagger -> C4 on a four-orbital chain.
Circuit build_spa_plus_x(const Circuit& spa, std::size_t n_orbitals,
                         const std::array<std::size_t, 4>& quad, int rr_layers,
                         std::span<const double> rr_initial);

/// RR start angles: the first layer undoes the local frame of the current
/// orbitals, the second enters the bonding frame of the shifted pairs, rest 0.
std::vector<double> rr_initial_guess(const Eigen::MatrixXd& coefficients,
                                     const std::array<std::size_t, 4>& quad, int layers);

}  // namespace molcirc
