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
#include <span>
#include <vector>

#include "molcirc/integrals.hpp"
#include "molcirc/pauli.hpp"

namespace molcirc {

/// Spin-orbital index of spatial orbital k: spin up on 2k, spin down on 2k+1.
inline constexpr std::size_t spin_up(std::size_t k) { return 2 * k; }
inline constexpr std::size_t spin_down(std::size_t k) { return 2 * k + 1; }

struct LadderOp {
  std::size_t mode = 0;
  bool dagger = false;
};

/// coeff * op_0 op_1 ... op_{n-1} (leftmost acts last).
struct FermionTerm {
  std::vector<LadderOp> ops;
  Complex coeff{1.0, 0.0};
};

inline LadderOp create(std::size_t mode) { return {mode, true}; }
inline LadderOp annihilate(std::size_t mode) { return {mode, false}; }

/// Jordan-Wigner image of a single ladder operator:
/// a_j -> (X_j + iY_j)/2 Z_{<j},  a+_j -> (X_j - iY_j)/2 Z_{<j}.
PauliSum jordan_wigner(LadderOp op);
PauliSum jordan_wigner(const FermionTerm& term);
PauliSum jordan_wigner(std::span<const FermionTerm> terms);

/// Second-quantized electronic Hamiltonian, JW-encoded on 2n qubits.
PauliSum build_qubit_hamiltonian(const MolecularIntegrals& ints);

/// Total number operator sum_k n_k on `n_modes` qubits.
PauliSum number_operator(std::size_t n_modes);
/// S_z = sum_k (n_{2k} - n_{2k+1}) / 2 on `n_modes` qubits.
PauliSum sz_operator(std::size_t n_modes);

enum class ExcitationKind { Single, PairDouble };

/// Spatial excitation `from` -> `to`.
struct ExcitationSpec {
  ExcitationKind kind = ExcitationKind::Single;
  std::size_t from = 0;
  std::size_t to = 1;
};

/// Hermitian generator G of the excitation, exp(-i theta/2 G) being the gate.
///   Single:     G = i sum_s (a+_{to,s} a_{from,s} - a+_{from,s} a_{to,s})
///   PairDouble: G = i (a+_{2t} a_{2f} a+_{2t+1} a_{2f+1} - h.c.)
PauliSum excitation_generator(const ExcitationSpec& spec);

}  // namespace molcirc
