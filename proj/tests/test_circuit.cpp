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

#include <cmath>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "molcirc/builder.hpp"
#include "molcirc/circuit.hpp"
#include "molcirc/errors.hpp"
#include "support.hpp"

using namespace molcirc;
using molcirc::test::circuit_unitary;
using molcirc::test::h_chain;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd expm_rotation(const PauliString& p, double angle, int n) {
  const Eigen::MatrixXcd a = Complex(0, -angle / 2) * PauliSum::term(p).matrix(n);
  return a.exp();
}

double diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

PauliString random_string(int n, std::mt19937& rng) {
  PauliString p;
  const char axes[] = {'I', 'X', 'Y', 'Z'};
  while (p.is_identity())
    for (int q = 0; q < n; ++q) p.set(q, axes[rng() % 4]);
  return p;
}

Circuit random_circuit(int n, int n_gates, std::mt19937& rng) {
  Circuit c(n);
  const auto t = c.parameter("t", 0.3);
  for (int k = 0; k < n_gates; ++k) {
    const int a = static_cast<int>(rng() % n);
    const int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
    switch (rng() % 7) {
      case 0: c.append(Gate::x(a)); break;
      case 1: c.append(Gate::h(a)); break;
      case 2: c.append(Gate::rx(a, Angle::constant(0.7))); break;
      case 3: c.append(Gate::ry(a, Angle::symbol(t, -0.5))); break;
      case 4: c.append(Gate::rz(a, Angle::symbol(t, 2.0))); break;
      case 5: c.append(Gate::cry(a, b, Angle::symbol(t))); break;
      default: c.append(Gate::cnot(a, b)); break;
    }
  }
  return c;
}

}  // namespace

// Gates

TEST_CASE("angles evaluate as multiplier times parameter plus offset") {
  const std::vector<double> p{0.5, 2.0};
  CHECK(Angle::constant(1.5).value(p) == 1.5);
  CHECK(Angle::symbol(1, -0.5).value(p) == -1.0);
  CHECK(Angle::symbol(0, 2.0).negated().value(p) == -1.0);
  CHECK(Angle{1, 1.0, 0.25}.scaled(2.0).value(p) == 4.5);
  CHECK_THROWS_AS(Angle::symbol(2).value(p), InputError);
}

TEST_CASE("single-qubit rotations match exp(-i a/2 P)") {
  const double a = 0.83;
  for (auto [kind, axis] : {std::pair{GateKind::RX, "X0"}, std::pair{GateKind::RY, "Y0"}, std::pair{GateKind::RZ, "Z0"}}) {
    Circuit c(1);
    c.append(Gate{kind, {0}, Angle::constant(a), {}});
    CHECK(diff(circuit_unitary(c, {}), expm_rotation(PauliString::parse(axis), a, 1)) < 1e-13);
  }
}

TEST_CASE("CRY acts only on the controlled subspace") {
  Circuit c(2);
  c.append(Gate::cry(0, 1, Angle::constant(1.1)));
  const auto u = circuit_unitary(c, {});
  // Control qubit 0 is index bit 0.
  CHECK(std::abs(u(0, 0) - Complex(1)) < 1e-14);
  CHECK(std::abs(u(2, 2) - Complex(1)) < 1e-14);
  CHECK(std::abs(u(1, 1) - std::cos(0.55)) < 1e-14);
  CHECK(std::abs(u(3, 1) - std::sin(0.55)) < 1e-14);
  CHECK(diff(circuit_unitary(lower(c), {}), u) < 1e-13);
}

TEST_CASE("invalid gates are rejected") {
  Circuit c(2);
  CHECK_THROWS_AS(c.append(Gate::x(2)), InputError);
  CHECK_THROWS_AS(c.append(Gate::cnot(1, 1)), InputError);
  CHECK_THROWS_AS(c.append(Gate::ry(0, Angle::symbol(0))), InputError);
  CHECK_THROWS_AS(c.append(Gate::rz(0, Angle::constant(std::nan("")))), InputError);
  CHECK_THROWS_AS(Circuit(-1), InputError);
  CHECK_THROWS_AS(compile_pauli_rotation(PauliString(), Angle::constant(1.0)), InputError);
}

// Pauli rotations

TEST_CASE("compiled Pauli rotations match the matrix exponential") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = random_string(4, rng);
    const double a = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    Circuit c(4);
    for (const auto& g : compile_pauli_rotation(p, Angle::constant(a))) c.append(g);
    INFO(p.str());
    CHECK(diff(circuit_unitary(c, {}), expm_rotation(p, a, 4)) < 1e-12);
  }
}

TEST_CASE("a Z rotation compiles to one RZ") {
  const auto gates = compile_pauli_rotation(PauliString::parse("Z0"), Angle::constant(0.4));
  REQUIRE(gates.size() == 1);
  CHECK(gates[0].kind == GateKind::RZ);
}

TEST_CASE("weight-3 rotation uses a four-CNOT ladder") {
  Circuit c(3);
  c.append(Gate::pauli_rotation(PauliString::parse("X0 Z1 Y2"), Angle::constant(0.2)));
  CHECK(metrics(c).cnot_count == 4);
}

// Transformations

TEST_CASE("lowering preserves the unitary") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_circuit(3, 12, rng);
    c.append(Gate::pauli_rotation(random_string(3, rng), Angle::symbol(0, 1.5)));
    const std::vector<double> p{0.9};
    const auto lowered = lower(c);
    for (const auto& g : lowered.gates()) {
      CHECK(g.kind != GateKind::CRY);
      CHECK(g.kind != GateKind::PauliRotation);
    }
    CHECK(diff(circuit_unitary(lowered, p), circuit_unitary(c, p)) < 1e-12);
  }
}

TEST_CASE("adjoint inverts the circuit") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_circuit(3, 15, rng);
    const std::vector<double> p{-1.3};
    const Eigen::MatrixXcd u = circuit_unitary(adjoint(c), p) * circuit_unitary(c, p);
    CHECK(diff(u, Eigen::MatrixXcd::Identity(8, 8)) < 1e-12);
  }
}

TEST_CASE("simulated circuits are unitary") {
  std::mt19937 rng(14);
  const auto c = random_circuit(4, 30, rng);
  const std::vector<double> p{2.2};
  const auto u = circuit_unitary(c, p);
  CHECK(diff(u.adjoint() * u, Eigen::MatrixXcd::Identity(16, 16)) < 1e-12);
}

TEST_CASE("adjacent inverse pairs cancel") {
  Circuit c(2);
  c.append(Gate::h(0));
  c.append(Gate::cnot(0, 1));
  c.append(Gate::cnot(0, 1));
  c.append(Gate::h(0));
  c.append(Gate::rz(1, Angle::constant(0.3)));
  c.append(Gate::rz(1, Angle::constant(-0.3)));
  CHECK(cancel_adjacent_inverses(c).gates().empty());

  std::mt19937 rng(15);
  const auto r = random_circuit(3, 40, rng);
  const std::vector<double> p{0.4};
  const auto reduced = cancel_adjacent_inverses(r);
  CHECK(reduced.gates().size() <= r.gates().size());
  CHECK(diff(circuit_unitary(reduced, p), circuit_unitary(r, p)) < 1e-12);
}

TEST_CASE("appending merges parameters by name") {
  Circuit a(2);
  a.append(Gate::ry(0, Angle::symbol(a.parameter("x", 0.1))));
  Circuit b(2);
  b.append(Gate::ry(1, Angle::symbol(b.parameter("y", 0.2))));
  b.append(Gate::ry(0, Angle::symbol(b.parameter("x", 0.5))));
  a.append(b);
  CHECK(a.parameter_names() == std::vector<std::string>{"x", "y"});
  CHECK(a.initial_values() == std::vector<double>{0.1, 0.2});
  REQUIRE(a.gates().size() == 3);
  CHECK(a.gates()[2].angle.param == 0);
  CHECK(a.find_parameter("y") == 1);
  CHECK_FALSE(a.find_parameter("z").has_value());
  CHECK_THROWS_AS(Circuit(1).append(b), InputError);
}

// Metrics

TEST_CASE("empty circuit has zero cost") { CHECK(metrics(Circuit(4)) == CircuitMetrics{}); }

TEST_CASE("zero fixed rotations are not counted") {
  Circuit c(2);
  c.append(Gate::rz(0, Angle::constant(0.0)));
  c.append(Gate::cnot(0, 1));
  const auto m = metrics(c);
  CHECK(m.cnot_count == 1);
  CHECK(m.depth == 1);
}

TEST_CASE("depth counts parallel layers") {
  Circuit c(4);
  c.append(Gate::cnot(0, 1));
  c.append(Gate::cnot(2, 3));
  c.append(Gate::cnot(1, 2));
  CHECK(metrics(c).depth == 2);
}

TEST_CASE("H4 separable-pair circuit cost") {
  ChemicalGraph g;
  g.atoms = h_chain(4, 1.5);
  g.edges = {{0, 1}, {2, 3}};
  const auto m = metrics(build_spa(g, 4));
  CHECK(m.n_parameters == 2);
  CHECK(m.cnot_count == 6);
  CHECK(m.depth == 3);
}

// Serialization

TEST_CASE("JSON round trip") {
  std::mt19937 rng(16);
  auto c = random_circuit(3, 20, rng);
  c.append(Gate::pauli_rotation(PauliString::parse("X0 Y2"), Angle{0, -2.0, 0.125}));
  const auto j = circuit_to_json(c);
  CHECK(circuit_from_json(j) == c);
  CHECK(circuit_from_json(nlohmann::json::parse(j.dump())) == c);
  CHECK_THROWS_AS(circuit_from_json(nlohmann::json::parse(R"({"n_qubits": 1})")), InputError);
}

TEST_CASE("text listing") {
  Circuit c(3);
  c.append(Gate::x(1));
  c.append(Gate::cry(0, 2, Angle::symbol(c.parameter("theta_0"), 0.5)));
  c.append(Gate::pauli_rotation(PauliString::parse("Z0 Z1"), Angle::constant(0.25)));
  CHECK(circuit_to_text(c) == "X 1\nCRY 0 2 theta_0*0.5\nPAULI [Z0 Z1] 0.25\n");
}
