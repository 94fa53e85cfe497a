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

#include "molcirc/builder.hpp"

#include <cmath>
#include <numbers>

#include "molcirc/errors.hpp"
#include "molcirc/fermion.hpp"

namespace molcirc {

namespace {

int qubits_for(std::size_t n_orbitals) { return static_cast<int>(2 * n_orbitals); }

void check_pair(std::size_t n_orbitals, std::size_t i, std::size_t j) {
  if (i == j) throw InputError("orbital pair needs two distinct orbitals");
  if (i >= n_orbitals || j >= n_orbitals) throw InputError("orbital index out of range");
}

std::string pair_name(const std::string& prefix, std::size_t i, std::size_t j) {
  return prefix + "_" + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

EdgeAssignment EdgeAssignment::from_graph(const ChemicalGraph& g) {
  EdgeAssignment a;
  for (const auto& [u, v] : g.edges) a.orbitals.push_back({u, v});
  for (std::size_t v : g.lone_pairs) a.orbitals.push_back({v});
  return a;
}

void EdgeAssignment::check(std::size_t n_orbitals) const {
  std::vector<bool> used(n_orbitals, false);
  for (const auto& edge : orbitals) {
    if (edge.empty()) throw InputError("edge assigned no orbitals");
    for (std::size_t o : edge) {
      if (o >= n_orbitals) throw InputError("assigned orbital out of range");
      if (used[o]) throw InputError("orbital " + std::to_string(o) + " assigned to two edges");
      used[o] = true;
    }
  }
}

Circuit build_spa(const EdgeAssignment& assignment, std::size_t n_orbitals,
                  const std::string& prefix) {
  assignment.check(n_orbitals);
  Circuit c(qubits_for(n_orbitals));
  for (std::size_t e = 0; e < assignment.orbitals.size(); ++e) {
    const auto& orb = assignment.orbitals[e];
    auto up = [&](std::size_t k) { return static_cast<int>(2 * orb[k]); };
    c.append(Gate::x(up(0)));
    for (std::size_t k = 0; k + 1 < orb.size(); ++k) {
      const std::size_t p = c.parameter(prefix + "_" + std::to_string(e) + "_" + std::to_string(k));
      // The control of the first rotation is always occupied.
      if (k == 0) {
        c.append(Gate::ry(up(1), Angle::symbol(p)));
      } else {
        c.append(Gate::cry(up(k), up(k + 1), Angle::symbol(p)));
      }
      c.append(Gate::cnot(up(k + 1), up(k)));
      c.append(Gate::cnot(up(k), up(k) + 1));
    }
    const std::size_t last = orb.size() - 1;
    c.append(Gate::cnot(up(last), up(last) + 1));
  }
  return c;
}

Circuit build_spa(const ChemicalGraph& g, std::size_t n_orbitals) {
  return build_spa(EdgeAssignment::from_graph(g), n_orbitals);
}

void append_exponential(Circuit& c, const PauliSum& generator, std::size_t param) {
  if (!generator.is_hermitian(1e-12)) throw InputError("generator is not Hermitian");
  if (!generator.all_commuting()) throw InputError("generator terms do not commute");
  for (const auto& [p, coeff] : generator.terms()) {
    if (p.is_identity()) continue;  // global phase
    c.append(Gate::pauli_rotation(p, Angle::symbol(param, coeff.real())));
  }
}

Circuit orbital_rotator(std::size_t n_orbitals, std::size_t i, std::size_t j,
                        const std::string& param, double initial) {
  check_pair(n_orbitals, i, j);
  Circuit c(qubits_for(n_orbitals));
  const std::size_t p = c.parameter(param, initial);
  append_exponential(c, excitation_generator({ExcitationKind::Single, j, i}), p);
  return c;
}

Circuit pair_correlator(std::size_t n_orbitals, std::size_t i, std::size_t j,
                        const std::string& param) {
  check_pair(n_orbitals, i, j);
  Circuit c(qubits_for(n_orbitals));
  const std::size_t p = c.parameter(param, 0.0);
  append_exponential(c, excitation_generator({ExcitationKind::PairDouble, i, j}), p);
  return c;
}

Circuit build_motif(const Circuit& base, const Motif& m) {
  const auto n_orbitals = static_cast<std::size_t>(base.n_qubits() / 2);
  Circuit rot(base.n_qubits());
  for (const auto& r : m.rotators) rot.append(orbital_rotator(n_orbitals, r.i, r.j, r.param, r.initial));
  Circuit out = base;
  out.append(rot);
  for (const auto& cor : m.correlators) {
    out.append(pair_correlator(n_orbitals, cor.i, cor.j, cor.param));
    out.set_initial_value(*out.find_parameter(cor.param), 0.0);
  }
  out.append(adjoint(rot));
  return out;
}

Circuit correlator_block_c4(std::size_t n_orbitals, const std::array<std::size_t, 4>& quad,
                            const std::string& prefix) {
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (quad[a] == quad[b]) throw InputError("C4 block needs four distinct orbitals");
  Circuit c(qubits_for(n_orbitals));
  const std::pair<std::size_t, std::size_t> pairs[] = {{0, 1}, {2, 3}, {1, 2}, {0, 3}};
  for (const auto& [a, b] : pairs)
    c.append(pair_correlator(n_orbitals, quad[a], quad[b], pair_name(prefix, quad[a], quad[b])));
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> brick_wall_pairs(std::size_t n, int layers) {
  if (layers < 1) throw InputError("rotator block needs at least one layer");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (int l = 0; l < layers; ++l)
    for (std::size_t k = static_cast<std::size_t>(l % 2); k + 1 < n; k += 2) out.emplace_back(k, k + 1);
  return out;
}

Circuit rotator_block_rr(std::size_t n_orbitals, const std::vector<std::size_t>& orbitals,
                         int layers, const std::string& prefix, std::span<const double> initial) {
  for (std::size_t a = 0; a < orbitals.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (orbitals[a] == orbitals[b]) throw InputError("rotator block orbitals collide");
  const auto pairs = brick_wall_pairs(orbitals.size(), layers);
  if (!initial.empty() && initial.size() != pairs.size())
    throw InputError("rotator block initial values do not match its size");
  Circuit c(qubits_for(n_orbitals));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::size_t i = orbitals[pairs[k].first];
    const std::size_t j = orbitals[pairs[k].second];
    c.append(orbital_rotator(n_orbitals, i, j, prefix + "_" + std::to_string(k),
                             initial.empty() ? 0.0 : initial[k]));
  }
  return c;
}

Eigen::MatrixXd initial_orbital_guess(const ChemicalGraph& g, std::size_t n_orbitals) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n_orbitals, n_orbitals);
  std::vector<bool> used(n_orbitals, false);
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& [a, b] : g.edges) {
    if (a >= n_orbitals || b >= n_orbitals || a == b) throw InputError("edge outside the orbital space");
    if (used[a] || used[b]) throw InputError("vertex shared by two edges in the orbital guess");
    used[a] = used[b] = true;
    u(a, a) = r;
    u(a, b) = r;
    u(b, a) = r;
    u(b, b) = -r;
  }
  return u;
}

double local_frame_angle(const Eigen::MatrixXd& coefficients, std::size_t i, std::size_t j) {
  return 2.0 * std::atan2(-coefficients(j, i), coefficients(i, i));
}

Motif graph_transition_motif(const ChemicalGraph& base, const ChemicalGraph& graph,
                             const Eigen::MatrixXd& coefficients, const std::string& tag) {
  Motif m;
  for (const auto& [a, b] : base.edges)
    m.rotators.push_back({a, b, pair_name("r" + tag, a, b), -local_frame_angle(coefficients, a, b)});
  for (const auto& [a, b] : graph.edges)
    m.rotators.push_back({a, b, pair_name("s" + tag, a, b), -std::numbers::pi / 2});
  for (const auto& [a, b] : graph.edges) m.correlators.push_back({a, b, pair_name("c" + tag, a, b)});
  return m;
}

Motif multigraph_motif(const ChemicalGraph& graph, std::size_t n_orbitals, std::size_t n_rotators,
                       const std::string& tag) {
  std::vector<std::pair<std::size_t, std::size_t>> ordered;
  for (std::size_t d = 1; d < n_orbitals; ++d)
    for (std::size_t i = 0; i + d < n_orbitals; ++i) ordered.emplace_back(i, i + d);
  Motif m;
  for (const auto& [a, b] : graph.edges) {
    const auto lo = std::min(a, b);
    const auto hi = std::max(a, b);
    std::vector<MotifRotator> rots{{lo, hi, pair_name("r" + tag, lo, hi), std::numbers::pi / 2}};
    for (const auto& [i, j] : ordered) {
      if (rots.size() >= n_rotators) break;
      if (i == lo && j == hi) continue;
      rots.push_back({i, j, pair_name("r" + tag, i, j), 0.0});
    }
    if (rots.size() < n_rotators) throw InputError("not enough orbital pairs for the requested rotators");
    // The edge rotator acts next to the correlator.
    m.rotators.insert(m.rotators.end(), rots.rbegin(), rots.rend());
    m.correlators.push_back({a, b, pair_name("c" + tag, a, b)});
  }
  return m;
}

Circuit build_spa_plus_x(const Circuit& spa, std::size_t n_orbitals,
                         const std::array<std::size_t, 4>& quad, int rr_layers,
                         std::span<const double> rr_initial) {
  const std::vector<std::size_t> chain(quad.begin(), quad.end());
  const Circuit rr = rotator_block_rr(n_orbitals, chain, rr_layers, "rr", rr_initial);
  Circuit out = spa;
  out.append(correlator_block_c4(n_orbitals, quad, "ca"));
  out.append(rr);
  out.append(correlator_block_c4(n_orbitals, quad, "cb"));
  out.append(adjoint(rr));
  out.append(correlator_block_c4(n_orbitals, quad, "cc"));
  return out;
}

std::vector<double> rr_initial_guess(const Eigen::MatrixXd& coefficients,
                                     const std::array<std::size_t, 4>& quad, int layers) {
  const auto pairs = brick_wall_pairs(4, layers);
  std::vector<double> out(pairs.size(), 0.0);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::size_t i = quad[pairs[k].first];
    const std::size_t j = quad[pairs[k].second];
    if (k < 2) {
      out[k] = -local_frame_angle(coefficients, i, j);
    } else if (k == 2) {
      out[k] = -std::numbers::pi / 2;
    }
  }
  return out;
}

}  // namespace molcirc
