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

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "molcirc/circuit.hpp"
#include "molcirc/integrals.hpp"
#include "molcirc/sim.hpp"

namespace molcirc::test {

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(MOLCIRC_TEST_DATA) / name;
}

inline std::vector<Atom> h_chain(std::size_t n, double spacing) {
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < n; ++k) atoms.push_back(Atom::from_symbol("H", {0, 0, spacing * k}));
  return atoms;
}

/// Columns are the circuit applied to each computational basis state.
inline Eigen::MatrixXcd circuit_unitary(const Circuit& c, std::span<const double> params) {
  const std::size_t dim = std::size_t{1} << c.n_qubits();
  Eigen::MatrixXcd u(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    const StateVector psi = simulate(c, params, b);
    for (std::size_t r = 0; r < dim; ++r) u(r, b) = psi[r];
  }
  return u;
}

inline Eigen::MatrixXd random_orthogonal(std::size_t n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = d(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

inline std::vector<double> random_angles(std::size_t n, std::mt19937& rng, double scale = 3.14159) {
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> out(n);
  for (double& x : out) x = d(rng);
  return out;
}

inline StateVector random_state(int n_qubits, std::mt19937& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> amp(std::size_t{1} << n_qubits);
  double norm = 0;
  for (auto& a : amp) {
    a = {d(rng), d(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amp) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(n_qubits, std::move(amp));
}

}  // namespace molcirc::test
