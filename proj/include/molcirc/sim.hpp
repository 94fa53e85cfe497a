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
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "molcirc/circuit.hpp"
#include "molcirc/integrals.hpp"
#include "molcirc/pauli.hpp"

namespace molcirc {

inline constexpr int kDefaultMaxQubits = 16;

/// Integer index of a ket written qubit 0 first: "1100" -> 3.
std::uint64_t basis_index(std::string_view ket);

/// Dense state on n qubits; qubit 0 is the least significant index bit.
class StateVector {
 public:
  StateVector() = default;
  StateVector(int n_qubits, std::uint64_t basis = 0, int max_qubits = kDefaultMaxQubits);
  static StateVector from_amplitudes(int n_qubits, std::vector<Complex> amplitudes);

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amp_.size(); }
  const std::vector<Complex>& amplitudes() const noexcept { return amp_; }
  std::vector<Complex>& amplitudes() noexcept { return amp_; }
  Complex operator[](std::size_t i) const { return amp_[i]; }

  double norm() const;
  Complex inner(const StateVector& other) const;  // <this|other>

  /// Applies `g`, adding `shift` to its rotation angle.
  void apply(const Gate& g, std::span<const double> params, double shift = 0.0);
  void apply_pauli_rotation(const PauliString& p, double angle);

  /// a_mode |psi> (unnormalized).
  StateVector annihilate(std::size_t mode) const;

  /// Binary dump: int32 qubit count followed by 2^n (re, im) doubles.
  void write_binary(std::ostream& out) const;
  static StateVector read_binary(std::istream& in);

 private:
  int n_ = 0;
  std::vector<Complex> amp_;
};

/// Optional angle offset applied to a single gate during simulation.
struct GateShift {
  std::size_t gate = 0;
  double delta = 0.0;
};

StateVector simulate(const Circuit& c, std::span<const double> params, const StateVector& initial,
                     std::optional<GateShift> shift = std::nullopt);
StateVector simulate(const Circuit& c, std::span<const double> params, std::uint64_t initial = 0,
                     int max_qubits = kDefaultMaxQubits);

/// Hermitian operator with a real expectation value.
class Observable {
 public:
  virtual ~Observable() = default;
  virtual double expectation(const StateVector& psi) const = 0;
};

/// Pauli sum compiled for repeated expectation values (terms grouped by X mask).
class PauliObservable : public Observable {
 public:
  explicit PauliObservable(const PauliSum& h);
  double expectation(const StateVector& psi) const override;
  /// H|psi>.
  StateVector apply(const StateVector& psi) const;
  int min_qubits() const noexcept { return min_qubits_; }

 private:
  struct Group {
    std::uint64_t x = 0;
    std::vector<std::uint64_t> z;
    std::vector<Complex> coeff;  // includes i^{|x & z|}
  };
  std::vector<Group> groups_;
  int min_qubits_ = 0;
};

/// <psi|H|psi>; throws InputError for non-Hermitian H and NumericalError if the
/// imaginary residual exceeds 1e-10.
double expectation(const StateVector& psi, const PauliSum& h);

/// Spin-summed reduced density matrices over spatial orbitals:
/// one(k,l) = sum_s <a+_{ks} a_{ls}>,
/// two(p,q,r,s) = sum_{st} <a+_{ps} a+_{rt} a_{st} a_{qs}>,
/// so E = sum h*one + 1/2 sum g*two + e_offset.
struct Rdm {
  Eigen::MatrixXd one;
  TwoElectronTensor two;
};

/// Throws InputError if psi is not confined to one particle-number sector.
Rdm rdm12(const StateVector& psi);
double rdm_energy(const Rdm& rdm, const MolecularIntegrals& ints);

/// Weight of psi outside the `n_electrons` sector.
double sector_leakage(const StateVector& psi, int n_electrons);

double fidelity(const StateVector& psi, const StateVector& phi);
/// Overlap with an orthonormal degenerate subspace, sum_i |<v_i|psi>|^2.
double fidelity(const StateVector& psi, std::span<const StateVector> subspace);

/// Separable-pair state: each edge holds one electron pair spread over its orbitals.
struct SpaEdge {
  std::vector<std::size_t> orbitals;
  std::vector<double> angles;  // orbitals.size() - 1 entries
};

struct SpaState {
  std::size_t n_orbitals = 0;
  std::vector<SpaEdge> edges;

  /// Pair amplitudes c_k per edge, with c_k = cos(t_k/2) prod_{l<k} sin(t_l/2)
  /// and the last equal to the product of all sines.
  std::vector<double> pair_amplitudes(std::size_t edge) const;
  /// Throws InputError on overlapping or out-of-range orbitals.
  void check() const;
};

/// Closed-form RDMs of the pair product state.
Rdm spa_rdm(const SpaState& s);
/// Closed-form energy; O(n^2) memory.
double spa_energy(const SpaState& s, const MolecularIntegrals& ints);
StateVector to_statevector(const SpaState& s, int max_qubits = kDefaultMaxQubits);

}  // namespace molcirc
