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

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "molcirc/integrals.hpp"
#include "molcirc/sim.hpp"

namespace molcirc {

inline constexpr std::size_t kMaxSectorDimension = 2'000'000;
inline constexpr std::size_t kDenseSectorLimit = 2000;

/// Determinants with fixed spin-up and spin-down counts; spin orbital
/// layout as the qubit register (up on even bits, down on odd bits).
class SectorBasis {
 public:
  SectorBasis(std::size_t n_orbitals, int n_up, int n_down);

  std::size_t size() const noexcept { return dets_.size(); }
  std::size_t n_orbitals() const noexcept { return n_orbitals_; }
  std::uint64_t det(std::size_t i) const { return dets_[i]; }
  const std::vector<std::uint64_t>& dets() const noexcept { return dets_; }
  /// Index of `det`, or -1 if outside the sector.
  long index(std::uint64_t det) const;

  /// C(n, n_up) * C(n, n_down).
  static std::size_t dimension(std::size_t n_orbitals, int n_up, int n_down);

 private:
  std::size_t n_orbitals_ = 0;
  std::vector<std::uint64_t> dets_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Sector Hamiltonian (including e_offset on the diagonal) via Slater-Condon rules.
Eigen::SparseMatrix<double> sector_hamiltonian(const MolecularIntegrals& ints,
                                               const SectorBasis& basis);

/// Electronic Hamiltonian restricted to one sector, evaluated on register states.
/// Throws NumericalError if a state leaks out of the sector by more than 1e-10.
class SectorObservable : public Observable {
 public:
  SectorObservable(const MolecularIntegrals& ints, int n_electrons, int two_sz);
  double expectation(const StateVector& psi) const override;
  std::size_t dimension() const noexcept { return basis_.size(); }

 private:
  SectorBasis basis_;
  Eigen::SparseMatrix<double> h_;
};

/// Hamiltonian on the full 2^(2n) register, indexed by determinant bits.
Eigen::SparseMatrix<double> fock_hamiltonian(const MolecularIntegrals& ints,
                                             int max_qubits = kDefaultMaxQubits);

/// Electronic Hamiltonian over all particle-number sectors. Handles states
/// that leave the physical sector, such as parameter-shifted circuits.
class FockObservable : public Observable {
 public:
  explicit FockObservable(const MolecularIntegrals& ints, int max_qubits = kDefaultMaxQubits);
  double expectation(const StateVector& psi) const override;

 private:
  int n_qubits_;
  Eigen::SparseMatrix<double> h_;
};

struct FciResult {
  double energy = 0.0;
  /// Orthonormal ground-state (sub)space in the sector basis; more than one
  /// column if the lowest level is degenerate within 1e-8.
  Eigen::MatrixXd sector_vectors;
  /// Same vectors embedded in the 2^(2n) register; empty if it exceeds the cap.
  std::vector<StateVector> states;
  std::size_t sector_dimension = 0;
};

/// Lowest eigenpair(s) in the (n_electrons, two_sz) sector.
FciResult fci_ground_state(const MolecularIntegrals& ints, int n_electrons, int two_sz,
                           int max_qubits = kDefaultMaxQubits);
inline FciResult fci_ground_state(const MolecularIntegrals& ints) {
  return fci_ground_state(ints, ints.n_electrons, ints.two_sz);
}

/// Lowest eigenpair of a symmetric operator by Lanczos with full reorthogonalization.
std::pair<double, Eigen::VectorXd> lanczos_lowest(const Eigen::SparseMatrix<double>& h,
                                                  double tol = 1e-10, int max_iter = 300);

/// (E - E_ref) * 1000.
inline double error_millihartree(double e, double e_ref) { return (e - e_ref) * 1000.0; }

}  // namespace molcirc
