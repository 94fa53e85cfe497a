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

#include "molcirc/sim.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "molcirc/errors.hpp"

namespace molcirc {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex i_power(int k) {
  switch (k & 3) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

void check_qubits(int n, int max_qubits) {
  if (n < 0) throw InputError("negative qubit count");
  if (n > max_qubits) {
    throw InputError(std::to_string(n) + " qubits exceed the simulation cap of " +
                     std::to_string(max_qubits));
  }
}

// Applies the 2x2 matrix [[a,b],[c,d]] to qubit q, restricted to indices where
// all bits of `control` are set.
void apply_1q(std::vector<Complex>& amp, int q, Complex a, Complex b, Complex c, Complex d,
              std::uint64_t control = 0) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  const std::uint64_t dim = amp.size();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    if ((i & control) != control) continue;
    const Complex v0 = amp[i];
    const Complex v1 = amp[i | bit];
    amp[i] = a * v0 + b * v1;
    amp[i | bit] = c * v0 + d * v1;
  }
}

}  // namespace

std::uint64_t basis_index(std::string_view ket) {
  if (ket.size() > 64) throw InputError("basis ket too long");
  std::uint64_t idx = 0;
  for (std::size_t q = 0; q < ket.size(); ++q) {
    if (ket[q] == '1') {
      idx |= std::uint64_t{1} << q;
    } else if (ket[q] != '0') {
      throw InputError("basis ket must contain only 0 and 1");
    }
  }
  return idx;
}

StateVector::StateVector(int n_qubits, std::uint64_t basis, int max_qubits) : n_(n_qubits) {
  check_qubits(n_qubits, max_qubits);
  amp_.assign(std::size_t{1} << n_qubits, Complex{});
  if (basis >= amp_.size()) throw InputError("initial basis state out of range");
  amp_[basis] = 1.0;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<Complex> amplitudes) {
  if (n_qubits < 0 || n_qubits > 30 || amplitudes.size() != (std::size_t{1} << n_qubits))
    throw InputError("amplitude count does not match qubit count");
  StateVector s;
  s.n_ = n_qubits;
  s.amp_ = std::move(amplitudes);
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const Complex& a : amp_) acc += std::norm(a);
  return std::sqrt(acc);
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.amp_.size() != amp_.size()) throw InputError("state dimension mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < amp_.size(); ++i) acc += std::conj(amp_[i]) * other.amp_[i];
  return acc;
}

void StateVector::apply_pauli_rotation(const PauliString& p, double angle) {
  if (p.min_qubits() > n_) throw InputError("Pauli rotation outside the register");
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const std::uint64_t x = p.x_mask();
  if (x == 0) {
    for (std::uint64_t b = 0; b < amp_.size(); ++b)
      amp_[b] *= Complex(c, 0.0) - kI * s * p.phase_on(b);
    return;
  }
  const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(x));
  for (std::uint64_t b = 0; b < amp_.size(); ++b) {
    if (b & pivot) continue;
    const std::uint64_t b2 = b ^ x;
    const Complex v = amp_[b];
    const Complex v2 = amp_[b2];
    // (P psi)[b] = phase_on(b2) psi[b2]
    amp_[b] = c * v - kI * s * p.phase_on(b2) * v2;
    amp_[b2] = c * v2 - kI * s * p.phase_on(b) * v;
  }
}

void StateVector::apply(const Gate& g, std::span<const double> params, double shift) {
  for (int q : g.qubits)
    if (q < 0 || q >= n_) throw InputError("gate qubit outside the register");
  const double theta = is_rotation(g.kind) ? g.angle.value(params) + shift : 0.0;
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::X:
      apply_1q(amp_, g.qubits[0], 0, 1, 1, 0);
      break;
    case GateKind::H:
      apply_1q(amp_, g.qubits[0], r, r, r, -r);
      break;
    case GateKind::RX:
      apply_1q(amp_, g.qubits[0], c, -kI * s, -kI * s, c);
      break;
    case GateKind::RY:
      apply_1q(amp_, g.qubits[0], c, -s, s, c);
      break;
    case GateKind::RZ:
      apply_1q(amp_, g.qubits[0], std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2));
      break;
    case GateKind::CRY:
      apply_1q(amp_, g.qubits[1], c, -s, s, c, std::uint64_t{1} << g.qubits[0]);
      break;
    case GateKind::CNOT:
      apply_1q(amp_, g.qubits[1], 0, 1, 1, 0, std::uint64_t{1} << g.qubits[0]);
      break;
    case GateKind::PauliRotation:
      apply_pauli_rotation(g.pauli, theta);
      break;
  }
}

StateVector StateVector::annihilate(std::size_t mode) const {
  if (mode >= static_cast<std::size_t>(n_)) throw InputError("mode outside the register");
  StateVector out;
  out.n_ = n_;
  out.amp_.assign(amp_.size(), Complex{});
  const std::uint64_t bit = std::uint64_t{1} << mode;
  const std::uint64_t below = bit - 1;
  for (std::uint64_t b = 0; b < amp_.size(); ++b) {
    if (!(b & bit)) continue;
    const double sign = (std::popcount(b & below) & 1) ? -1.0 : 1.0;
    out.amp_[b ^ bit] = sign * amp_[b];
  }
  return out;
}

void StateVector::write_binary(std::ostream& out) const {
  const std::int32_t n = n_;
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const Complex& a : amp_) {
    const double re = a.real();
    const double im = a.imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof re);
    out.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

StateVector StateVector::read_binary(std::istream& in) {
  std::int32_t n = 0;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n) || n < 0 || n > 30)
    throw InputError("bad state dump header");
  std::vector<Complex> amp(std::size_t{1} << n);
  for (Complex& a : amp) {
    double re = 0.0;
    double im = 0.0;
    if (!in.read(reinterpret_cast<char*>(&re), sizeof re) ||
        !in.read(reinterpret_cast<char*>(&im), sizeof im))
      throw InputError("truncated state dump");
    a = {re, im};
  }
  return from_amplitudes(n, std::move(amp));
}

StateVector simulate(const Circuit& c, std::span<const double> params, const StateVector& initial,
                     std::optional<GateShift> shift) {
  if (initial.n_qubits() != c.n_qubits()) throw InputError("initial state size mismatch");
  if (params.size() != c.n_parameters()) throw InputError("parameter count mismatch");
  StateVector psi = initial;
  const auto& gates = c.gates();
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const double delta = (shift && shift->gate == k) ? shift->delta : 0.0;
    psi.apply(gates[k], params, delta);
  }
  return psi;
}

StateVector simulate(const Circuit& c, std::span<const double> params, std::uint64_t initial,
                     int max_qubits) {
  return simulate(c, params, StateVector(c.n_qubits(), initial, max_qubits));
}

PauliObservable::PauliObservable(const PauliSum& h) {
  min_qubits_ = h.min_qubits();
  std::map<std::uint64_t, Group> by_x;
  for (const auto& [p, c] : h.terms()) {
    Group& g = by_x[p.x_mask()];
    g.x = p.x_mask();
    g.z.push_back(p.z_mask());
    g.coeff.push_back(c * i_power(std::popcount(p.x_mask() & p.z_mask())));
  }
  for (auto& [x, g] : by_x) groups_.push_back(std::move(g));
}

double PauliObservable::expectation(const StateVector& psi) const {
  if (psi.n_qubits() < min_qubits_) throw InputError("observable acts outside the register");
  const auto& amp = psi.amplitudes();
  const std::uint64_t dim = amp.size();
  Complex total{};
  for (const Group& g : groups_) {
    Complex acc{};
    for (std::uint64_t b = 0; b < dim; ++b) {
      const Complex pair = std::conj(amp[b ^ g.x]) * amp[b];
      if (pair == Complex{}) continue;
      Complex w{};
      for (std::size_t t = 0; t < g.z.size(); ++t)
        w += (std::popcount(g.z[t] & b) & 1) ? -g.coeff[t] : g.coeff[t];
      acc += w * pair;
    }
    total += acc;
  }
  if (std::abs(total.imag()) > 1e-10) throw NumericalError("expectation value has an imaginary part");
  return total.real();
}

StateVector PauliObservable::apply(const StateVector& psi) const {
  if (psi.n_qubits() < min_qubits_) throw InputError("observable acts outside the register");
  const auto& amp = psi.amplitudes();
  std::vector<Complex> out(amp.size());
  for (const Group& g : groups_) {
    for (std::uint64_t b = 0; b < amp.size(); ++b) {
      if (amp[b] == Complex{}) continue;
      Complex w{};
      for (std::size_t t = 0; t < g.z.size(); ++t)
        w += (std::popcount(g.z[t] & b) & 1) ? -g.coeff[t] : g.coeff[t];
      out[b ^ g.x] += w * amp[b];
    }
  }
  return StateVector::from_amplitudes(psi.n_qubits(), std::move(out));
}

double expectation(const StateVector& psi, const PauliSum& h) {
  if (!h.is_hermitian(1e-12)) throw InputError("expectation requires a Hermitian operator");
  return PauliObservable(h).expectation(psi);
}

double sector_leakage(const StateVector& psi, int n_electrons) {
  double out = 0.0;
  const auto& amp = psi.amplitudes();
  for (std::uint64_t b = 0; b < amp.size(); ++b)
    if (std::popcount(b) != n_electrons) out += std::norm(amp[b]);
  return out;
}

Rdm rdm12(const StateVector& psi) {
  const int n_modes = psi.n_qubits();
  if (n_modes % 2 != 0) throw InputError("rdm12 needs an even number of spin orbitals");
  const std::size_t n = static_cast<std::size_t>(n_modes / 2);

  // Dominant particle-number sector.
  std::vector<double> weight(n_modes + 1, 0.0);
  for (std::uint64_t b = 0; b < psi.dim(); ++b) weight[std::popcount(b)] += std::norm(psi[b]);
  int sector = 0;
  for (int k = 0; k <= n_modes; ++k)
    if (weight[k] > weight[sector]) sector = k;
  if (sector_leakage(psi, sector) > 1e-10) throw InputError("rdm12 requires a particle-number-pure state");

  std::vector<StateVector> single(n_modes);
  for (int m = 0; m < n_modes; ++m) single[m] = psi.annihilate(m);

  Rdm out;
  out.one = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t s = 0; s < 2; ++s)
        out.one(k, l) += single[2 * k + s].inner(single[2 * l + s]).real();

  // pair[Q][S] = a_S a_Q psi
  std::vector<StateVector> pair(n_modes * n_modes);
  for (int q = 0; q < n_modes; ++q)
    for (int s = 0; s < n_modes; ++s)
      if (q != s) pair[q * n_modes + s] = single[q].annihilate(s);

  // <a+_P a+_R a_S a_Q> = <a_R a_P psi | a_S a_Q psi>
  out.two = TwoElectronTensor(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double acc = 0.0;
          for (std::size_t si = 0; si < 2; ++si)
            for (std::size_t ti = 0; ti < 2; ++ti) {
              const std::size_t P = 2 * p + si;
              const std::size_t Q = 2 * q + si;
              const std::size_t R = 2 * r + ti;
              const std::size_t S = 2 * s + ti;
              if (P == R || Q == S) continue;
              acc += pair[P * n_modes + R].inner(pair[Q * n_modes + S]).real();
            }
          out.two(p, q, r, s) = acc;
        }
  return out;
}

double rdm_energy(const Rdm& rdm, const MolecularIntegrals& ints) {
  const std::size_t n = ints.n_orbitals();
  if (static_cast<std::size_t>(rdm.one.rows()) != n || rdm.two.dim() != n)
    throw InputError("RDM and integral dimensions differ");
  double e = ints.e_offset + (ints.h.array() * rdm.one.array()).sum();
  const auto g = ints.g.data();
  const auto d = rdm.two.data();
  double two = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) two += g[k] * d[k];
  return e + 0.5 * two;
}

double fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.dim() != phi.dim()) throw InputError("fidelity: state dimension mismatch");
  return std::norm(psi.inner(phi));
}

double fidelity(const StateVector& psi, std::span<const StateVector> subspace) {
  double out = 0.0;
  for (const StateVector& v : subspace) out += fidelity(v, psi);
  return out;
}

std::vector<double> SpaState::pair_amplitudes(std::size_t edge) const {
  const SpaEdge& e = edges.at(edge);
  const std::size_t r = e.orbitals.size();
  if (r == 0 || e.angles.size() + 1 != r) throw InputError("SPA edge needs one angle fewer than orbitals");
  std::vector<double> c(r);
  double prefix = 1.0;
  for (std::size_t k = 0; k + 1 < r; ++k) {
    c[k] = prefix * std::cos(e.angles[k] / 2);
    prefix *= std::sin(e.angles[k] / 2);
  }
  c[r - 1] = prefix;
  return c;
}

void SpaState::check() const {
  std::vector<bool> seen(n_orbitals, false);
  for (const SpaEdge& e : edges) {
    if (e.orbitals.empty() || e.angles.size() + 1 != e.orbitals.size())
      throw InputError("SPA edge needs one angle fewer than orbitals");
    for (std::size_t o : e.orbitals) {
      if (o >= n_orbitals) throw InputError("SPA orbital out of range");
      if (seen[o]) throw InputError("SPA edges share an orbital");
      seen[o] = true;
    }
  }
}

namespace {

// Per-orbital pair amplitude and owning edge (-1 if empty).
void spa_tables(const SpaState& s, std::vector<double>& amp, std::vector<long>& owner) {
  s.check();
  amp.assign(s.n_orbitals, 0.0);
  owner.assign(s.n_orbitals, -1);
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    const auto c = s.pair_amplitudes(e);
    for (std::size_t k = 0; k < c.size(); ++k) {
      amp[s.edges[e].orbitals[k]] = c[k];
      owner[s.edges[e].orbitals[k]] = static_cast<long>(e);
    }
  }
}

}  // namespace

// Seniority-zero product state: with o_p = c_p^2,
//   one(p,p) = 2 o_p
//   two(p,p,p,p) = 2 o_p
//   two(p,p,q,q) = 4 <N_p N_q>,  two(p,q,q,p) = -2 <N_p N_q>   (p != q)
//   two(p,q,p,q) = 2 <P+_p P_q>                                (p != q)
// where <N_p N_q> = o_p o_q across edges and 0 within an edge, and
// <P+_p P_q> = c_p c_q within an edge and 0 across edges.
Rdm spa_rdm(const SpaState& s) {
  std::vector<double> c;
  std::vector<long> owner;
  spa_tables(s, c, owner);
  const std::size_t n = s.n_orbitals;
  Rdm out;
  out.one = Eigen::MatrixXd::Zero(n, n);
  out.two = TwoElectronTensor(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double op = c[p] * c[p];
    out.one(p, p) = 2 * op;
    out.two(p, p, p, p) = 2 * op;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p || owner[p] < 0 || owner[q] < 0) continue;
      if (owner[p] == owner[q]) {
        out.two(p, q, p, q) = 2 * c[p] * c[q];
      } else {
        const double nn = op * c[q] * c[q];
        out.two(p, p, q, q) = 4 * nn;
        out.two(p, q, q, p) = -2 * nn;
      }
    }
  }
  return out;
}

double spa_energy(const SpaState& s, const MolecularIntegrals& ints) {
  if (ints.n_orbitals() != s.n_orbitals) throw InputError("SPA state and integrals differ in size");
  std::vector<double> c;
  std::vector<long> owner;
  spa_tables(s, c, owner);
  const std::size_t n = s.n_orbitals;
  double one = 0.0;
  double two = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double op = c[p] * c[p];
    one += ints.h(p, p) * 2 * op;
    two += ints.g(p, p, p, p) * 2 * op;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p || owner[p] < 0 || owner[q] < 0) continue;
      if (owner[p] == owner[q]) {
        two += ints.g(p, q, p, q) * 2 * c[p] * c[q];
      } else {
        const double nn = op * c[q] * c[q];
        two += ints.g(p, p, q, q) * 4 * nn - ints.g(p, q, q, p) * 2 * nn;
      }
    }
  }
  return ints.e_offset + one + 0.5 * two;
}

StateVector to_statevector(const SpaState& s, int max_qubits) {
  s.check();
  const int n_qubits = static_cast<int>(2 * s.n_orbitals);
  check_qubits(n_qubits, max_qubits);
  std::vector<Complex> amp{1.0};
  std::vector<std::uint64_t> idx{0};
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    const auto c = s.pair_amplitudes(e);
    std::vector<Complex> next_amp;
    std::vector<std::uint64_t> next_idx;
    for (std::size_t a = 0; a < amp.size(); ++a)
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0.0) continue;
        next_amp.push_back(amp[a] * c[k]);
        next_idx.push_back(idx[a] | (std::uint64_t{3} << (2 * s.edges[e].orbitals[k])));
      }
    amp = std::move(next_amp);
    idx = std::move(next_idx);
  }
  StateVector psi(n_qubits, 0, max_qubits);
  psi.amplitudes()[0] = 0.0;
  for (std::size_t a = 0; a < amp.size(); ++a) psi.amplitudes()[idx[a]] += amp[a];
  return psi;
}

}  // namespace molcirc
