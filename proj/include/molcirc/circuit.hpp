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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "molcirc/pauli.hpp"

namespace molcirc {

enum class GateKind { X, H, RX, RY, RZ, CRY, CNOT, PauliRotation };

const char* gate_name(GateKind kind);
bool is_rotation(GateKind kind);

/// Rotation angle: either a fixed value or multiplier * parameter[param].
struct Angle {
  std::optional<std::size_t> param;
  double multiplier = 1.0;
  double fixed = 0.0;

  static Angle constant(double value) { return {std::nullopt, 1.0, value}; }
  static Angle symbol(std::size_t index, double multiplier = 1.0) {
    return {index, multiplier, 0.0};
  }

  bool is_symbolic() const noexcept { return param.has_value(); }
  double value(std::span<const double> params) const;
  Angle negated() const { return {param, -multiplier, -fixed}; }
  Angle scaled(double s) const { return {param, multiplier * s, fixed * s}; }

  bool operator==(const Angle&) const = default;
};

/// Gate. Rotations act as exp(-i angle/2 P) with P the axis Pauli (or the
/// stored Pauli string). CRY(control, target) applies RY on target if the
/// control is |1>. CNOT qubits are (control, target).
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> qubits;
  Angle angle;
  PauliString pauli;

  static Gate x(int q) { return {GateKind::X, {q}, {}, {}}; }
  static Gate h(int q) { return {GateKind::H, {q}, {}, {}}; }
  static Gate rx(int q, Angle a) { return {GateKind::RX, {q}, a, {}}; }
  static Gate ry(int q, Angle a) { return {GateKind::RY, {q}, a, {}}; }
  static Gate rz(int q, Angle a) { return {GateKind::RZ, {q}, a, {}}; }
  static Gate cry(int c, int t, Angle a) { return {GateKind::CRY, {c, t}, a, {}}; }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, {c, t}, {}, {}}; }
  static Gate pauli_rotation(const PauliString& p, Angle a);

  bool operator==(const Gate&) const = default;
};

/// Ordered gate list over `n_qubits` qubits with a named parameter table.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<std::string>& parameter_names() const noexcept { return names_; }
  std::size_t n_parameters() const noexcept { return names_.size(); }
  /// Initial parameter values, one per name.
  const std::vector<double>& initial_values() const noexcept { return initial_; }
  void set_initial_value(std::size_t index, double value);

  /// Returns the index of parameter `name`, creating it with `initial` if absent.
  std::size_t parameter(const std::string& name, double initial = 0.0);
  std::optional<std::size_t> find_parameter(const std::string& name) const;

  /// Appends a gate after validating qubit indices and parameter references.
  void append(Gate g);
  /// Appends another circuit; its parameters are merged by name.
  void append(const Circuit& other);

  bool operator==(const Circuit&) const = default;

 private:
  int n_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<std::string> names_;
  std::vector<double> initial_;
  std::map<std::string, std::size_t> index_;
};

/// Basis change, CNOT ladder to the last support qubit, RZ, mirrored uncompute.
/// Implements exp(-i angle/2 P).
std::vector<Gate> compile_pauli_rotation(const PauliString& p, const Angle& angle);

/// Rewrites CRY and PauliRotation gates into {X, H, RX, RY, RZ, CNOT}.
Circuit lower(const Circuit& c);

/// Reversed order with negated angles; parameter table unchanged.
Circuit adjoint(const Circuit& c);

/// Removes adjacent self-inverse pairs (CNOT, H, X) and adjacent fixed
/// rotations that cancel. Unitary is unchanged.
Circuit cancel_adjacent_inverses(const Circuit& c);

struct CircuitMetrics {
  std::size_t cnot_count = 0;
  std::size_t depth = 0;
  std::size_t n_parameters = 0;
  bool operator==(const CircuitMetrics&) const = default;
};

/// Counts on the lowered circuit. Fixed rotations by exactly zero are ignored.
CircuitMetrics metrics(const Circuit& c);

nlohmann::json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);
/// One gate per line, e.g. "CRY 0 2 theta_0*0.5".
std::string circuit_to_text(const Circuit& c);

}  // namespace molcirc
