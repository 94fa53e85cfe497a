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

#include "molcirc/fermion.hpp"

#include <cmath>
#include <string>

#include "molcirc/errors.hpp"

namespace molcirc {

namespace {

void check_mode(std::size_t mode) {
  if (mode >= static_cast<std::size_t>(kMaxPauliQubits)) {
    throw InputError("fermionic mode " + std::to_string(mode) + " exceeds qubit capacity");
  }
}

}  // namespace

PauliSum jordan_wigner(LadderOp op) {
  check_mode(op.mode);
  const std::uint64_t bit = std::uint64_t{1} << op.mode;
  const std::uint64_t tail = bit - 1;
  PauliSum out;
  out.add(PauliString(bit, tail), 0.5);
  // Y_j Z_{<j} carries z bit on j as well.
  out.add(PauliString(bit, tail | bit), op.dagger ? Complex(0.0, -0.5) : Complex(0.0, 0.5));
  return out;
}

PauliSum jordan_wigner(const FermionTerm& term) {
  PauliSum out = PauliSum::identity(term.coeff);
  for (const LadderOp& op : term.ops) out = out * jordan_wigner(op);
  return out;
}

PauliSum jordan_wigner(std::span<const FermionTerm> terms) {
  PauliSum out;
  for (const auto& t : terms) out += jordan_wigner(t);
  return out;
}

PauliSum build_qubit_hamiltonian(const MolecularIntegrals& ints) {
  ints.check();
  const std::size_t n = ints.n_orbitals();
  const std::size_t modes = 2 * n;
  check_mode(modes - 1);

  // e[P][Q] = JW(a+_P a_Q) for same-spin mode pairs.
  std::vector<PauliSum> e(modes * modes);
  auto excitation = [&](std::size_t P, std::size_t Q) -> PauliSum& { return e[P * modes + Q]; };
  for (std::size_t P = 0; P < modes; ++P)
    for (std::size_t Q = P % 2; Q < modes; Q += 2)
      excitation(P, Q) = jordan_wigner(FermionTerm{{create(P), annihilate(Q)}, 1.0});

  PauliSum H = PauliSum::identity(ints.e_offset);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const double hkl = ints.h(k, l);
      if (hkl == 0.0) continue;
      for (std::size_t s = 0; s < 2; ++s) H += excitation(2 * k + s, 2 * l + s) * Complex(hkl);
    }

  // a+_P a+_R a_S a_Q = (a+_P a_Q)(a+_R a_S) - delta_{QR} a+_P a_S
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          const double v = 0.5 * ints.g(k, l, m, q);
          if (v == 0.0) continue;
          for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t t = 0; t < 2; ++t) {
              const std::size_t P = 2 * k + s;
              const std::size_t Q = 2 * l + s;
              const std::size_t R = 2 * m + t;
              const std::size_t S = 2 * q + t;
              H += (excitation(P, Q) * excitation(R, S)) * Complex(v);
              if (Q == R) H -= excitation(P, S) * Complex(v);
            }
        }
  if (!H.is_hermitian(1e-12)) throw NumericalError("qubit Hamiltonian is not Hermitian");
  // Hermitian sums carry real coefficients; drop rounding residue.
  PauliSum real;
  for (const auto& [p, c] : H.terms()) real.add(p, c.real());
  return real;
}

PauliSum number_operator(std::size_t n_modes) {
  PauliSum out;
  for (std::size_t k = 0; k < n_modes; ++k) {
    check_mode(k);
    out.add(PauliString{}, 0.5);
    out.add(PauliString(0, std::uint64_t{1} << k), -0.5);
  }
  return out;
}

PauliSum sz_operator(std::size_t n_modes) {
  PauliSum out;
  for (std::size_t k = 0; k < n_modes; ++k) {
    check_mode(k);
    // n = (I - Z)/2, weighted by +-1/2.
    out.add(PauliString(0, std::uint64_t{1} << k), k % 2 == 0 ? -0.25 : 0.25);
  }
  return out;
}

PauliSum excitation_generator(const ExcitationSpec& spec) {
  if (spec.from == spec.to) throw InputError("excitation requires distinct orbitals");
  const std::size_t f = spec.from;
  const std::size_t t = spec.to;
  const Complex i{0.0, 1.0};
  std::vector<FermionTerm> terms;
  if (spec.kind == ExcitationKind::Single) {
    for (std::size_t s = 0; s < 2; ++s) {
      terms.push_back({{create(2 * t + s), annihilate(2 * f + s)}, i});
      terms.push_back({{create(2 * f + s), annihilate(2 * t + s)}, -i});
    }
  } else {
    terms.push_back({{create(spin_up(t)), annihilate(spin_up(f)), create(spin_down(t)),
                      annihilate(spin_down(f))},
                     i});
    terms.push_back({{create(spin_down(f)), annihilate(spin_down(t)), create(spin_up(f)),
                      annihilate(spin_up(t))},
                     -i});
  }
  PauliSum G = jordan_wigner(terms);
  if (!G.is_hermitian(1e-12)) throw NumericalError("excitation generator is not Hermitian");
  PauliSum real;
  for (const auto& [p, c] : G.terms()) real.add(p, c.real());
  return real;
}

}  // namespace molcirc
