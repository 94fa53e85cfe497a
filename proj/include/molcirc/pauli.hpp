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

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace molcirc {

using Complex = std::complex<double>;

/// Maximum qubit count representable by PauliString (bit masks).
inline constexpr int kMaxPauliQubits = 64;

/// Tensor product of single-qubit Paulis stored as X and Z bit masks.
/// A qubit with both bits set carries Y; the operator is
/// prod_q i^(x_q z_q) X^(x_q) Z^(z_q), so Y = iXZ.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::uint64_t x_mask, std::uint64_t z_mask) : x_(x_mask), z_(z_mask) {}

  /// Parses "X0 Z1 Y2" (whitespace separated, any order). Empty text is identity.
  static PauliString parse(std::string_view text);

  /// Sets the Pauli on `qubit`; axis is one of 'I','X','Y','Z'.
  void set(int qubit, char axis);
  char axis(int qubit) const;

  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }
  std::uint64_t support_mask() const noexcept { return x_ | z_; }
  int weight() const noexcept;
  bool is_identity() const noexcept { return (x_ | z_) == 0; }
  /// Qubits carrying a non-identity Pauli, ascending.
  std::vector<int> support() const;
  /// One past the highest qubit touched, 0 for identity.
  int min_qubits() const noexcept;

  /// Canonical text: "X0 Z1 Y2", "I" for identity.
  std::string str() const;

  /// P|b> = phase(b) |b ^ x_mask()|.
  Complex phase_on(std::uint64_t basis) const noexcept;

  bool commutes_with(const PauliString& other) const noexcept;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// a * b = phase * result.
std::pair<Complex, PauliString> multiply(const PauliString& a, const PauliString& b);

/// Weighted sum of Pauli strings with complex coefficients. Entries with
/// magnitude at or below the pruning threshold are dropped.
class PauliSum {
 public:
  static constexpr double kPruneThreshold = 1e-14;

  PauliSum() = default;
  static PauliSum identity(Complex coeff = 1.0);
  static PauliSum term(const PauliString& p, Complex coeff = 1.0);

  void add(const PauliString& p, Complex coeff);
  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex scalar);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, Complex s) { return a *= s; }
  friend PauliSum operator*(Complex s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  /// Hermitian conjugate (Pauli strings are Hermitian, so conjugates coefficients).
  PauliSum adjoint() const;
  PauliSum commutator(const PauliSum& other) const;

  void prune(double threshold = kPruneThreshold);

  const std::map<PauliString, Complex>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  Complex coefficient(const PauliString& p) const;

  /// Largest |Im c| over all coefficients.
  double max_imaginary() const;
  bool is_hermitian(double tol = 1e-12) const { return max_imaginary() <= tol; }
  /// Largest coefficient magnitude (0 for the empty sum).
  double max_abs() const;
  /// True if every pair of strings commutes.
  bool all_commuting() const;
  int min_qubits() const;

  /// Dense 2^n x 2^n matrix; qubit 0 is the least-significant index bit.
  Eigen::MatrixXcd matrix(int n_qubits) const;

  nlohmann::json to_json() const;
  static PauliSum from_json(const nlohmann::json& j);

  bool operator==(const PauliSum& other) const = default;

 private:
  std::map<PauliString, Complex> terms_;
};

}  // namespace molcirc
