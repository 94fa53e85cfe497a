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

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "molcirc/builder.hpp"
#include "molcirc/circuit.hpp"
#include "molcirc/integrals.hpp"
#include "molcirc/sim.hpp"

namespace molcirc {

struct OptimizerOptions {
  int max_iterations = 500;
  double energy_tol = 1e-9;    // |dE| between iterations, Hartree
  double gradient_tol = 1e-5;  // Euclidean norm
};

struct TracePoint {
  int iteration = 0;
  double energy = 0.0;
  double gradient_norm = 0.0;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

using Objective = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

/// Line-search BFGS. Converges when both |dE| and the gradient norm fall
/// below their tolerances. A NaN objective throws NumericalError carrying the
/// offending parameter vector.
MinimizeResult bfgs_minimize(const Objective& f, const GradientFn& grad, std::vector<double> x0,
                             const OptimizerOptions& options = {});

std::vector<double> central_difference(const Objective& f, std::span<const double> x,
                                       double step = 1e-4);

/// Expectation value of a circuit state; CRY gates are decomposed so every
/// parameterized gate is a Pauli rotation.
class CircuitEnergy {
 public:
  CircuitEnergy(const Circuit& c, std::shared_ptr<const Observable> h, StateVector initial);

  std::size_t n_parameters() const noexcept { return circuit_.n_parameters(); }
  const Circuit& circuit() const noexcept { return circuit_; }
  double operator()(std::span<const double> params) const;
  StateVector state(std::span<const double> params) const;
  /// Sum over gate occurrences of m * [E(+pi/2) - E(-pi/2)] / 2.
  std::vector<double> parameter_shift_gradient(std::span<const double> params) const;
  std::vector<double> finite_difference_gradient(std::span<const double> params,
                                                 double step = 1e-4) const;

 private:
  Circuit circuit_;
  std::shared_ptr<const Observable> h_;
  StateVector initial_;
};

enum class GradientMethod { ParameterShift, FiniteDifference };

struct VqeOptions {
  OptimizerOptions optimizer;
  GradientMethod gradient = GradientMethod::ParameterShift;
  double fd_step = 1e-4;
};

struct VqeResult {
  double energy = 0.0;
  std::vector<double> parameters;
  std::map<std::string, double> named_parameters;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

VqeResult vqe_minimize(const Circuit& c, std::shared_ptr<const Observable> h,
                       std::span<const double> initial_params, const StateVector& initial_state,
                       const VqeOptions& options = {});
VqeResult vqe_minimize(const Circuit& c, const PauliSum& h, std::span<const double> initial_params,
                       const StateVector& initial_state, const VqeOptions& options = {});

/// Largest relative deviation between parameter-shift gradients and central
/// differences at steps 2e-3 and 1e-3, Richardson-extrapolated; components
/// below 1e-8 compare absolutely.
double gradient_check(const Circuit& c, const PauliSum& h, std::span<const double> params,
                      const StateVector& initial_state);

/// Variational state whose energy can be minimized for given integrals and
/// whose RDMs are available for orbital optimization.
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;
  virtual std::size_t n_parameters() const = 0;
  virtual VqeResult minimize(const MolecularIntegrals& ints, std::span<const double> start,
                             const VqeOptions& options) const = 0;
  virtual Rdm rdm(std::span<const double> params) const = 0;
};

/// Separable-pair state evaluated in closed form.
class SpaModel : public EnergyModel {
 public:
  SpaModel(EdgeAssignment assignment, std::size_t n_orbitals);
  std::size_t n_parameters() const override;
  VqeResult minimize(const MolecularIntegrals& ints, std::span<const double> start,
                     const VqeOptions& options) const override;
  Rdm rdm(std::span<const double> params) const override;
  SpaState state(std::span<const double> params) const;

 private:
  EdgeAssignment assignment_;
  std::size_t n_orbitals_;
};

/// Arbitrary circuit on a statevector. Energies use the full-register
/// Hamiltonian; RDMs require the state to stay in its (N, 2S_z) sector.
class CircuitModel : public EnergyModel {
 public:
  CircuitModel(Circuit c, StateVector initial, int n_electrons, int two_sz);
  std::size_t n_parameters() const override { return circuit_.n_parameters(); }
  VqeResult minimize(const MolecularIntegrals& ints, std::span<const double> start,
                     const VqeOptions& options) const override;
  Rdm rdm(std::span<const double> params) const override;

 private:
  Circuit circuit_;
  StateVector initial_;
  int n_electrons_;
  int two_sz_;
};

/// Orthogonal exp(K) with K(p,q) = -K(q,p) = kappa_k over pairs p < q in row-major order.
Eigen::MatrixXd rotation_from_angles(std::span<const double> kappa, std::size_t n);

struct OrbitalOptOptions {
  VqeOptions inner;
  OptimizerOptions orbital;
  int max_outer = 50;
  double outer_tol = 1e-7;
};

struct OrbitalOptResult {
  Eigen::MatrixXd rotation;  // rows are orbitals over the input basis
  MolecularIntegrals integrals;
  double energy = 0.0;
  std::vector<double> parameters;
  int outer_iterations = 0;
  int inner_iterations = 0;
  std::vector<double> energy_trace;
};

/// Alternates parameter optimization at fixed orbitals with an orbital step
/// minimizing the RDM energy functional over exp(K).
OrbitalOptResult optimize_orbitals(const EnergyModel& model, const MolecularIntegrals& base,
                                   const Eigen::MatrixXd& guess, std::span<const double> params0,
                                   const OrbitalOptOptions& options = {});

/// CSV with columns iteration,energy,gradient_norm.
void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

}  // namespace molcirc
