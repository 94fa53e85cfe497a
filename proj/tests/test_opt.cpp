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

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>
#include <Eigen/LU>

#include "molcirc/builder.hpp"
#include "molcirc/errors.hpp"
#include "molcirc/fci.hpp"
#include "molcirc/fermion.hpp"
#include "molcirc/opt.hpp"
#include "support.hpp"

using namespace molcirc;
using molcirc::test::h_chain;

namespace {

ChemicalGraph graph_of(std::size_t n, double spacing, std::vector<Edge> edges) {
  ChemicalGraph g;
  g.atoms = h_chain(n, spacing);
  g.edges = std::move(edges);
  return g;
}

double rosenbrock(std::span<const double> x) {
  return (1 - x[0]) * (1 - x[0]) + 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]);
}

std::vector<double> rosenbrock_grad(std::span<const double> x) {
  return {-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] * x[0]), 200 * (x[1] - x[0] * x[0])};
}

}  // namespace

// Minimizer

TEST_CASE("BFGS finds the Rosenbrock minimum") {
  OptimizerOptions opts;
  opts.max_iterations = 1000;
  opts.energy_tol = 1e-14;
  opts.gradient_tol = 1e-8;
  const auto r = bfgs_minimize(rosenbrock, rosenbrock_grad, {-1.2, 1.0}, opts);
  CHECK(r.converged);
  CHECK(r.x[0] == Catch::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == Catch::Approx(1.0).epsilon(1e-6));
  CHECK(r.value < 1e-10);
  CHECK_FALSE(r.trace.empty());
}

TEST_CASE("NaN objective is a numerical error") {
  const Objective f = [](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); };
  const GradientFn g = [](std::span<const double> x) { return std::vector<double>(x.size(), 0.0); };
  CHECK_THROWS_AS(bfgs_minimize(f, g, {0.5}), NumericalError);
}

TEST_CASE("central differences of a quadratic") {
  const Objective f = [](std::span<const double> x) { return 3 * x[0] * x[0] - x[0] * x[1]; };
  const std::vector<double> x{0.5, 2.0};
  const auto g = central_difference(f, x);
  CHECK(g[0] == Catch::Approx(3 * 2 * 0.5 - 2.0));
  CHECK(g[1] == Catch::Approx(-0.5));
}

TEST_CASE("write trace CSV") {
  std::ostringstream out;
  const std::vector<TracePoint> t{{0, -1.5, 0.25}, {1, -1.75, 0.0}};
  write_trace_csv(out, t);
  const auto text = out.str();
  CHECK(text.rfind("iteration,energy,gradient_norm\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

// Variational energies

TEST_CASE("parameter-free circuit returns its energy") {
  const auto ints = compute_sto3g_integrals(h_chain(2, 0.74));
  Circuit c(4);
  c.append(Gate::x(0));
  c.append(Gate::x(1));
  const auto h = build_qubit_hamiltonian(ints);
  const auto r = vqe_minimize(c, h, {}, StateVector(4));
  CHECK(r.parameters.empty());
  CHECK(r.energy == Catch::Approx(expectation(StateVector(4, basis_index("1100")), h)));
}

TEST_CASE("pair circuit is exact for H2 in the bonding frame") {
  const auto g = graph_of(2, 0.74, {{0, 1}});
  const auto ints = rotate_integrals(compute_sto3g_integrals(g.atoms), initial_orbital_guess(g, 2));
  const auto c = build_spa(g, 2);
  const std::vector<double> start{0.0};
  const auto r = vqe_minimize(c, build_qubit_hamiltonian(ints), start, StateVector(4));
  CHECK(r.converged);
  CHECK(std::abs(r.energy - fci_ground_state(ints).energy) < 1e-8);
  CHECK(r.named_parameters.at("t_0_0") == r.parameters[0]);
}

TEST_CASE("both gradient methods reach the same minimum") {
  const auto g = graph_of(2, 1.2, {{0, 1}});
  const auto ints = rotate_integrals(compute_sto3g_integrals(g.atoms), initial_orbital_guess(g, 2));
  const auto c = build_spa(g, 2);
  const std::vector<double> start{0.1};
  VqeOptions fd;
  fd.gradient = GradientMethod::FiniteDifference;
  const auto a = vqe_minimize(c, build_qubit_hamiltonian(ints), start, StateVector(4));
  const auto b = vqe_minimize(c, build_qubit_hamiltonian(ints), start, StateVector(4), fd);
  CHECK(a.energy == Catch::Approx(b.energy).epsilon(1e-10));
}

// Gradients

TEST_CASE("parameter shift matches central differences on a pair circuit") {
  const auto g = graph_of(2, 0.74, {{0, 1}});
  const auto h = build_qubit_hamiltonian(compute_sto3g_integrals(g.atoms));
  const auto c = build_spa(g, 2);
  for (double t : {0.3, -1.7, 2.9}) {
    const std::vector<double> p{t};
    CHECK(gradient_check(c, h, p, StateVector(4)) < 1e-6);
  }
}

TEST_CASE("parameter shift matches central differences on an extended circuit") {
  const auto base = graph_of(4, 1.5, {{0, 1}, {2, 3}});
  const auto central = graph_of(4, 1.5, {{1, 2}});
  const auto ints = compute_sto3g_integrals(base.atoms);
  const auto c = build_motif(build_spa(base, 4),
                             graph_transition_motif(base, central, initial_orbital_guess(base, 4), "1"));
  REQUIRE(c.n_parameters() == 6);
  const auto h = build_qubit_hamiltonian(ints);
  std::mt19937 rng(51);
  for (int trial = 0; trial < 2; ++trial) {
    const auto p = molcirc::test::random_angles(c.n_parameters(), rng);
    CHECK(gradient_check(c, h, p, StateVector(8)) < 1e-5);
  }
}

TEST_CASE("shift rule is exact with the full-register observable") {
  const auto ints = compute_sto3g_integrals(h_chain(3, 1.3));
  Circuit c(6);
  c.append(Gate::x(0));
  c.append(Gate::x(1));
  c.append(Gate::x(2));
  c.append(orbital_rotator(3, 0, 1, "a", 0.2));
  c.append(pair_correlator(3, 0, 2, "b"));
  c.append(orbital_rotator(3, 1, 2, "c", -0.4));
  const CircuitEnergy e(c, std::make_shared<FockObservable>(ints), StateVector(6));
  std::mt19937 rng(52);
  const auto p = molcirc::test::random_angles(3, rng);
  const auto shift = e.parameter_shift_gradient(p);
  const auto fd = e.finite_difference_gradient(p, 1e-5);
  for (std::size_t k = 0; k < 3; ++k) CHECK(shift[k] == Catch::Approx(fd[k]).margin(1e-8));
}

TEST_CASE("constant Hamiltonian has zero gradient") {
  const auto c = build_spa(graph_of(2, 0.74, {{0, 1}}), 2);
  const CircuitEnergy e(c, std::make_shared<PauliObservable>(PauliSum::identity(-0.8)), StateVector(4));
  const std::vector<double> p{0.6};
  CHECK(e(p) == Catch::Approx(-0.8));
  CHECK(std::abs(e.parameter_shift_gradient(p)[0]) < 1e-14);
}

// Orbital optimization

TEST_CASE("orbital rotations from angles") {
  CHECK(rotation_from_angles(std::vector<double>(3, 0.0), 3) == Eigen::MatrixXd::Identity(3, 3));
  const std::vector<double> k{0.4, -1.1, 0.7};
  const auto u = rotation_from_angles(k, 3);
  CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(u.determinant() == Catch::Approx(1.0));
  const auto r = rotation_from_angles(std::vector<double>{0.3}, 2);
  CHECK(r(0, 0) == Catch::Approx(std::cos(0.3)));
  CHECK(std::abs(r(0, 1)) == Catch::Approx(std::sin(0.3)));
  CHECK_THROWS_AS(rotation_from_angles(k, 2), InputError);
}

TEST_CASE("H2 orbital optimization finds the bonding frame") {
  const auto g = graph_of(2, 1.4, {{0, 1}});
  const auto ints = compute_sto3g_integrals(g.atoms);
  const SpaModel model(EdgeAssignment::from_graph(g), 2);
  const Eigen::MatrixXd guess = rotation_from_angles(std::vector<double>{0.5}, 2);
  const std::vector<double> t0{0.0};
  const auto r = optimize_orbitals(model, ints, guess, t0);
  CHECK(std::abs(r.energy - fci_ground_state(ints).energy) < 1e-7);
  const double s = 1 / std::sqrt(2.0);
  for (Eigen::Index row = 0; row < 2; ++row) {
    CHECK(std::abs(r.rotation(row, 0)) == Catch::Approx(s).epsilon(1e-4));
    CHECK(std::abs(r.rotation(row, 1)) == Catch::Approx(s).epsilon(1e-4));
  }
  CHECK((r.integrals.coefficients - r.rotation * ints.coefficients).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orbital optimization of H4 pairs") {
  const auto g = graph_of(4, 1.5, {{0, 1}, {2, 3}});
  const auto ints = compute_sto3g_integrals(g.atoms);
  const double fci = fci_ground_state(ints).energy;
  const SpaModel model(EdgeAssignment::from_graph(g), 4);
  const std::vector<double> t0(2, 0.0);
  const auto r = optimize_orbitals(model, ints, initial_orbital_guess(g, 4), t0);

  SECTION("variational and monotone") {
    CHECK(r.energy >= fci - 1e-10);
    CHECK(error_millihartree(r.energy, fci) == Catch::Approx(16.0).margin(2.0));
    REQUIRE_FALSE(r.energy_trace.empty());
    for (std::size_t k = 1; k < r.energy_trace.size(); ++k) CHECK(r.energy_trace[k] <= r.energy_trace[k - 1] + 1e-10);
    CHECK(r.inner_iterations >= r.outer_iterations);
  }

  SECTION("rotated integrals reproduce the energy") {
    CHECK(spa_energy(model.state(r.parameters), r.integrals) == Catch::Approx(r.energy).epsilon(1e-12));
    CHECK(fci_ground_state(r.integrals).energy == Catch::Approx(fci).epsilon(1e-10));
  }

  SECTION("restarting at the optimum stops after one outer iteration") {
    const auto again = optimize_orbitals(model, ints, r.rotation, r.parameters);
    CHECK(again.outer_iterations == 1);
    CHECK(again.energy == Catch::Approx(r.energy).epsilon(1e-9));
  }

  SECTION("an added motif does not raise the energy") {
    const auto central = graph_of(4, 1.5, {{1, 2}});
    const auto c = build_motif(build_spa(g, 4), graph_transition_motif(g, central, r.integrals.coefficients, "1"));
    auto start = c.initial_values();
    start[0] = r.parameters[0];
    start[1] = r.parameters[1];
    const CircuitModel plus(c, StateVector(8), 4, 0);
    const auto v = plus.minimize(r.integrals, start, {});
    CHECK(v.energy <= r.energy + 1e-10);
    CHECK(v.energy >= fci - 1e-10);
  }
}

TEST_CASE("circuit RDMs require the declared sector") {
  Circuit c(4);
  c.append(Gate::x(0));
  c.append(Gate::x(1));
  c.append(orbital_rotator(2, 0, 1, "a", 0.3));
  const std::vector<double> p{0.3};
  CHECK(CircuitModel(c, StateVector(4), 2, 0).rdm(p).one.trace() == Catch::Approx(2.0));
  CHECK_THROWS_AS(CircuitModel(c, StateVector(4), 2, 2).rdm(p), NumericalError);
  c.append(Gate::h(3));
  CHECK_THROWS_AS(CircuitModel(c, StateVector(4), 2, 0).rdm(p), NumericalError);
}
