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

#include "molcirc/pauli.hpp"

#include <bit>
#include <cctype>
#include <sstream>

#include "molcirc/errors.hpp"

namespace molcirc {

namespace {

// i^k for k mod 4.
Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
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

}  // namespace

PauliString PauliString::parse(std::string_view text) {
  PauliString p;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    if (tok.size() < 2) throw InputError("bad Pauli token '" + tok + "'");
    const char axis = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
    int qubit = 0;
    try {
      std::size_t used = 0;
      qubit = std::stoi(tok.substr(1), &used);
      if (used != tok.size() - 1) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("bad Pauli token '" + tok + "'");
    }
    if (p.axis(qubit) != 'I') throw InputError("qubit repeated in Pauli string '" + std::string(text) + "'");
    p.set(qubit, axis);
  }
  return p;
}

void PauliString::set(int qubit, char axis) {
  if (qubit < 0 || qubit >= kMaxPauliQubits) throw InputError("Pauli qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  x_ &= ~bit;
  z_ &= ~bit;
  switch (axis) {
    case 'I':
      break;
    case 'X':
      x_ |= bit;
      break;
    case 'Y':
      x_ |= bit;
      z_ |= bit;
      break;
    case 'Z':
      z_ |= bit;
      break;
    default:
      throw InputError(std::string("unknown Pauli axis '") + axis + "'");
  }
}

char PauliString::axis(int qubit) const {
  if (qubit < 0 || qubit >= kMaxPauliQubits) return 'I';
  const bool x = (x_ >> qubit) & 1U;
  const bool z = (z_ >> qubit) & 1U;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

int PauliString::weight() const noexcept { return std::popcount(x_ | z_); }

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (std::uint64_t m = x_ | z_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

int PauliString::min_qubits() const noexcept {
  const std::uint64_t m = x_ | z_;
  return m == 0 ? 0 : 64 - std::countl_zero(m);
}

std::string PauliString::str() const {
  if (is_identity()) return "I";
  std::string out;
  for (int q : support()) {
    if (!out.empty()) out += ' ';
    out += axis(q);
    out += std::to_string(q);
  }
  return out;
}

Complex PauliString::phase_on(std::uint64_t basis) const noexcept {
  const int k = std::popcount(x_ & z_) + 2 * std::popcount(z_ & basis);
  return i_power(k);
}

bool PauliString::commutes_with(const PauliString& other) const noexcept {
  return (std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_)) % 2 == 0;
}

std::pair<Complex, PauliString> multiply(const PauliString& a, const PauliString& b) {
  const PauliString c(a.x_mask() ^ b.x_mask(), a.z_mask() ^ b.z_mask());
  const int k = std::popcount(a.x_mask() & a.z_mask()) + std::popcount(b.x_mask() & b.z_mask()) -
                std::popcount(c.x_mask() & c.z_mask()) +
                2 * std::popcount(a.z_mask() & b.x_mask());
  return {i_power(k), c};
}

PauliSum PauliSum::identity(Complex coeff) { return term(PauliString{}, coeff); }

PauliSum PauliSum::term(const PauliString& p, Complex coeff) {
  PauliSum s;
  s.add(p, coeff);
  return s;
}

void PauliSum::add(const PauliString& p, Complex coeff) {
  auto [it, inserted] = terms_.try_emplace(p, coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) <= kPruneThreshold) terms_.erase(it);
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& [p, c] : other.terms_) add(p, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  for (const auto& [p, c] : other.terms_) add(p, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(Complex scalar) {
  for (auto& [p, c] : terms_) c *= scalar;
  prune();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  for (const auto& [pa, ca] : a.terms_)
    for (const auto& [pb, cb] : b.terms_) {
      const auto [phase, pc] = multiply(pa, pb);
      out.add(pc, phase * ca * cb);
    }
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out = *this;
  for (auto& [p, c] : out.terms_) c = std::conj(c);
  return out;
}

PauliSum PauliSum::commutator(const PauliSum& other) const {
  return (*this) * other - other * (*this);
}

void PauliSum::prune(double threshold) {
  std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second) <= threshold; });
}

Complex PauliSum::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Complex{} : it->second;
}

double PauliSum::max_imaginary() const {
  double worst = 0.0;
  for (const auto& [p, c] : terms_) worst = std::max(worst, std::abs(c.imag()));
  return worst;
}

double PauliSum::max_abs() const {
  double worst = 0.0;
  for (const auto& [p, c] : terms_) worst = std::max(worst, std::abs(c));
  return worst;
}

bool PauliSum::all_commuting() const {
  for (auto a = terms_.begin(); a != terms_.end(); ++a)
    for (auto b = std::next(a); b != terms_.end(); ++b)
      if (!a->first.commutes_with(b->first)) return false;
  return true;
}

int PauliSum::min_qubits() const {
  int n = 0;
  for (const auto& [p, c] : terms_) n = std::max(n, p.min_qubits());
  return n;
}

Eigen::MatrixXcd PauliSum::matrix(int n_qubits) const {
  if (n_qubits < min_qubits()) throw InputError("PauliSum::matrix: too few qubits");
  if (n_qubits > 14) throw NumericalError("PauliSum::matrix: dense matrix too large");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, c] : terms_)
    for (std::uint64_t b = 0; b < dim; ++b) m(b ^ p.x_mask(), b) += c * p.phase_on(b);
  return m;
}

nlohmann::json PauliSum::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [p, c] : terms_) {
    out.push_back({{"string", p.is_identity() ? std::string() : p.str()},
                   {"coeff", {c.real(), c.imag()}}});
  }
  return out;
}

PauliSum PauliSum::from_json(const nlohmann::json& j) {
  PauliSum out;
  try {
    for (const auto& entry : j) {
      const auto& coeff = entry.at("coeff");
      out.add(PauliString::parse(entry.at("string").get<std::string>()),
              {coeff.at(0).get<double>(), coeff.at(1).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("PauliSum JSON: ") + e.what());
  }
  return out;
}

}  // namespace molcirc
