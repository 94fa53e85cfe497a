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

#include "molcirc/opt.hpp"

#include <bit>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include <ceres/ceres.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "molcirc/errors.hpp"
#include "molcirc/fci.hpp"

namespace molcirc {

namespace {

class FirstOrder : public ceres::FirstOrderFunction {
 public:
  FirstOrder(const Objective& f, const GradientFn& g, int n) : f_(f), g_(g), n_(n) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    const std::span<const double> xs(x, static_cast<std::size_t>(n_));
    const double v = f_(xs);
    if (!std::isfinite(v)) return fail(xs);
    cost[0] = v;
    if (gradient != nullptr) {
      const auto g = g_(xs);
      for (int k = 0; k < n_; ++k) {
        if (!std::isfinite(g[k])) return fail(xs);
        gradient[k] = g[k];
      }
    }
    return true;
  }
  int NumParameters() const override { return n_; }

  bool failed() const noexcept { return failed_; }
  const std::vector<double>& snapshot() const noexcept { return snapshot_; }

 private:
  bool fail(std::span<const double> xs) const {
    if (!failed_) snapshot_.assign(xs.begin(), xs.end());
    failed_ = true;
    return false;
  }

  const Objective& f_;
  const GradientFn& g_;
  int n_;
  mutable bool failed_ = false;
  mutable std::vector<double> snapshot_;
};

class Monitor : public ceres::IterationCallback {
 public:
  Monitor(const OptimizerOptions& o, std::vector<TracePoint>& trace) : o_(o), trace_(trace) {}

  ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
    trace_.push_back({s.iteration, s.cost, s.gradient_norm});
    if (s.iteration == 0 && s.gradient_norm < o_.gradient_tol) {
      converged = true;
      return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
    }
    if (s.iteration > 0 && std::abs(s.cost_change) < o_.energy_tol &&
        s.gradient_norm < o_.gradient_tol) {
      converged = true;
      return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
    }
    return ceres::SOLVER_CONTINUE;
  }

  bool converged = false;

 private:
  const OptimizerOptions& o_;
  std::vector<TracePoint>& trace_;
};

std::string snapshot_text(const std::vector<double>& x) {
  std::ostringstream out;
  out.precision(17);
  out << "[";
  for (std::size_t k = 0; k < x.size(); ++k) out << (k ? ", " : "") << x[k];
  out << "]";
  return out.str();
}

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// Decomposes CRY so that every parameterized gate is a Pauli rotation.
Circuit decompose_cry(const Circuit& c) {
  Circuit out(c.n_qubits());
  for (std::size_t k = 0; k < c.n_parameters(); ++k)
    out.parameter(c.parameter_names()[k], c.initial_values()[k]);
  for (const Gate& g : c.gates()) {
    if (g.kind != GateKind::CRY) {
      out.append(g);
      continue;
    }
    out.append(Gate::ry(g.qubits[1], g.angle.scaled(0.5)));
    out.append(Gate::cnot(g.qubits[0], g.qubits[1]));
    out.append(Gate::ry(g.qubits[1], g.angle.scaled(-0.5)));
    out.append(Gate::cnot(g.qubits[0], g.qubits[1]));
  }
  return out;
}

VqeResult to_vqe_result(const MinimizeResult& r, const std::vector<std::string>& names) {
  VqeResult out;
  out.energy = r.value;
  out.parameters = r.x;
  for (std::size_t k = 0; k < names.size(); ++k) out.named_parameters[names[k]] = r.x[k];
  out.iterations = r.iterations;
  out.gradient_norm = r.gradient_norm;
  out.converged = r.converged;
  out.trace = r.trace;
  return out;
}

}  // namespace

MinimizeResult bfgs_minimize(const Objective& f, const GradientFn& grad, std::vector<double> x0,
                             const OptimizerOptions& options) {
  MinimizeResult out;
  if (x0.empty()) {
    out.value = f(x0);
    if (!std::isfinite(out.value)) throw NumericalError("objective is not finite");
    out.converged = true;
    out.trace.push_back({0, out.value, 0.0});
    return out;
  }
  auto* fn = new FirstOrder(f, grad, static_cast<int>(x0.size()));
  ceres::GradientProblem problem(fn);  // takes ownership
  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::BFGS;
  o.max_num_iterations = options.max_iterations;
  o.function_tolerance = 1e-16;
  o.gradient_tolerance = 1e-14;
  o.parameter_tolerance = 1e-16;
  o.logging_type = ceres::SILENT;
  Monitor monitor(options, out.trace);
  o.callbacks.push_back(&monitor);
  o.update_state_every_iteration = true;

  ceres::GradientProblemSolver::Summary summary;
  std::vector<double> x = x0;
  ceres::Solve(o, problem, x.data(), &summary);
  if (fn->failed()) {
    throw NumericalError("non-finite objective at parameters " + snapshot_text(fn->snapshot()));
  }
  out.x = x;
  out.value = f(x);
  out.iterations = summary.iterations.empty() ? 0 : static_cast<int>(summary.iterations.size()) - 1;
  out.gradient_norm = norm2(grad(x));
  out.converged = monitor.converged || out.gradient_norm < options.gradient_tol;
  return out;
}

std::vector<double> central_difference(const Objective& f, std::span<const double> x, double step) {
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = xp[k];
    xp[k] = x0 + step;
    const double fp = f(xp);
    xp[k] = x0 - step;
    const double fm = f(xp);
    xp[k] = x0;
    g[k] = (fp - fm) / (2 * step);
  }
  return g;
}

CircuitEnergy::CircuitEnergy(const Circuit& c, std::shared_ptr<const Observable> h,
                             StateVector initial)
    : circuit_(decompose_cry(c)), h_(std::move(h)), initial_(std::move(initial)) {
  if (!h_) throw InputError("missing observable");
  if (initial_.n_qubits() != circuit_.n_qubits()) throw InputError("initial state size mismatch");
}

StateVector CircuitEnergy::state(std::span<const double> params) const {
  return simulate(circuit_, params, initial_);
}

double CircuitEnergy::operator()(std::span<const double> params) const {
  return h_->expectation(state(params));
}

std::vector<double> CircuitEnergy::parameter_shift_gradient(std::span<const double> params) const {
  if (params.size() != circuit_.n_parameters()) throw InputError("parameter count mismatch");
  const double shift = std::numbers::pi / 2;
  std::vector<double> grad(params.size(), 0.0);
  const auto& gates = circuit_.gates();
  StateVector psi = initial_;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Gate& g = gates[k];
    if (is_rotation(g.kind) && g.angle.param) {
      double e[2];
      for (int s = 0; s < 2; ++s) {
        StateVector phi = psi;
        phi.apply(g, params, s == 0 ? shift : -shift);
        for (std::size_t j = k + 1; j < gates.size(); ++j) phi.apply(gates[j], params);
        e[s] = h_->expectation(phi);
      }
      grad[*g.angle.param] += g.angle.multiplier * (e[0] - e[1]) / 2;
    }
    psi.apply(g, params);
  }
  return grad;
}

std::vector<double> CircuitEnergy::finite_difference_gradient(std::span<const double> params,
                                                              double step) const {
  return central_difference([this](std::span<const double> x) { return (*this)(x); }, params, step);
}

VqeResult vqe_minimize(const Circuit& c, std::shared_ptr<const Observable> h,
                       std::span<const double> initial_params, const StateVector& initial_state,
                       const VqeOptions& options) {
  if (initial_params.size() != c.n_parameters()) throw InputError("parameter count mismatch");
  const CircuitEnergy energy(c, std::move(h), initial_state);
  const Objective f = [&](std::span<const double> x) { return energy(x); };
  const GradientFn g = [&](std::span<const double> x) {
    return options.gradient == GradientMethod::ParameterShift
               ? energy.parameter_shift_gradient(x)
               : energy.finite_difference_gradient(x, options.fd_step);
  };
  const auto r = bfgs_minimize(f, g, {initial_params.begin(), initial_params.end()}, options.optimizer);
  return to_vqe_result(r, c.parameter_names());
}

VqeResult vqe_minimize(const Circuit& c, const PauliSum& h, std::span<const double> initial_params,
                       const StateVector& initial_state, const VqeOptions& options) {
  if (!h.is_hermitian(1e-12)) throw InputError("Hamiltonian is not Hermitian");
  return vqe_minimize(c, std::make_shared<PauliObservable>(h), initial_params, initial_state,
                      options);
}

double gradient_check(const Circuit& c, const PauliSum& h, std::span<const double> params,
                      const StateVector& initial_state) {
  const CircuitEnergy energy(c, std::make_shared<PauliObservable>(h), initial_state);
  const auto exact = energy.parameter_shift_gradient(params);
  // Richardson extrapolation cancels the O(h^2) term of the central difference.
  const auto coarse = energy.finite_difference_gradient(params, 2e-3);
  const auto fine = energy.finite_difference_gradient(params, 1e-3);
  double worst = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double fd = (4 * fine[k] - coarse[k]) / 3;
    const double scale = std::max(std::abs(exact[k]), 1e-8);
    worst = std::max(worst, std::abs(exact[k] - fd) / scale);
  }
  return worst;
}

SpaModel::SpaModel(EdgeAssignment assignment, std::size_t n_orbitals)
    : assignment_(std::move(assignment)), n_orbitals_(n_orbitals) {
  assignment_.check(n_orbitals_);
}

std::size_t SpaModel::n_parameters() const {
  std::size_t n = 0;
  for (const auto& e : assignment_.orbitals) n += e.size() - 1;
  return n;
}

SpaState SpaModel::state(std::span<const double> params) const {
  if (params.size() != n_parameters()) throw InputError("parameter count mismatch");
  SpaState s;
  s.n_orbitals = n_orbitals_;
  std::size_t k = 0;
  for (const auto& e : assignment_.orbitals) {
    SpaEdge edge{e, {}};
    for (std::size_t j = 0; j + 1 < e.size(); ++j) edge.angles.push_back(params[k++]);
    s.edges.push_back(std::move(edge));
  }
  return s;
}

VqeResult SpaModel::minimize(const MolecularIntegrals& ints, std::span<const double> start,
                             const VqeOptions& options) const {
  const Objective f = [&](std::span<const double> x) { return spa_energy(state(x), ints); };
  // The energy is a + b cos(t) + c sin(t) in each angle, so the shift rule is exact.
  const GradientFn g = [&](std::span<const double> x) {
    if (options.gradient == GradientMethod::FiniteDifference) return central_difference(f, x, options.fd_step);
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      xp[k] = x[k] + std::numbers::pi / 2;
      const double ep = f(xp);
      xp[k] = x[k] - std::numbers::pi / 2;
      const double em = f(xp);
      xp[k] = x[k];
      grad[k] = (ep - em) / 2;
    }
    return grad;
  };
  const auto r = bfgs_minimize(f, g, {start.begin(), start.end()}, options.optimizer);
  std::vector<std::string> names;
  for (std::size_t e = 0; e < assignment_.orbitals.size(); ++e)
    for (std::size_t k = 0; k + 1 < assignment_.orbitals[e].size(); ++k)
      names.push_back("t_" + std::to_string(e) + "_" + std::to_string(k));
  return to_vqe_result(r, names);
}

Rdm SpaModel::rdm(std::span<const double> params) const { return spa_rdm(state(params)); }

CircuitModel::CircuitModel(Circuit c, StateVector initial, int n_electrons, int two_sz)
    : circuit_(std::move(c)), initial_(std::move(initial)), n_electrons_(n_electrons),
      two_sz_(two_sz) {
  if (initial_.n_qubits() != circuit_.n_qubits()) throw InputError("initial state size mismatch");
}

VqeResult CircuitModel::minimize(const MolecularIntegrals& ints, std::span<const double> start,
                                 const VqeOptions& options) const {
  auto h = std::make_shared<FockObservable>(ints);
  return vqe_minimize(circuit_, h, start, initial_, options);
}

Rdm CircuitModel::rdm(std::span<const double> params) const {
  const StateVector psi = simulate(circuit_, params, initial_);
  double outside = 0.0;
  for (std::size_t b = 0; b < psi.dim(); ++b) {
    const int up = std::popcount(b & 0x5555555555555555ull);
    const int down = std::popcount(b & 0xAAAAAAAAAAAAAAAAull);
    if (up + down != n_electrons_ || up - down != two_sz_) outside += std::norm(psi[b]);
  }
  if (outside > 1e-10) throw NumericalError("circuit state leaves its electron-number and spin sector");
  return rdm12(psi);
}

Eigen::MatrixXd rotation_from_angles(std::span<const double> kappa, std::size_t n) {
  if (kappa.size() != n * (n - 1) / 2) throw InputError("orbital angle count mismatch");
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  std::size_t idx = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      k(p, q) = kappa[idx];
      k(q, p) = -kappa[idx];
      ++idx;
    }
  return k.exp();
}

OrbitalOptResult optimize_orbitals(const EnergyModel& model, const MolecularIntegrals& base,
                                   const Eigen::MatrixXd& guess, std::span<const double> params0,
                                   const OrbitalOptOptions& options) {
  const std::size_t n = base.n_orbitals();
  if (guess.rows() != static_cast<Eigen::Index>(n) || guess.cols() != static_cast<Eigen::Index>(n))
    throw InputError("orbital guess has the wrong shape");
  if ((guess.transpose() * guess - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("orbital guess is not orthogonal");

  OrbitalOptResult out;
  out.rotation = guess;
  out.parameters.assign(params0.begin(), params0.end());
  MolecularIntegrals ints = rotate_integrals(base, guess);
  const std::size_t n_kappa = n * (n - 1) / 2;

  for (int outer = 1; outer <= options.max_outer; ++outer) {
    out.outer_iterations = outer;
    const VqeResult inner = model.minimize(ints, out.parameters, options.inner);
    out.inner_iterations += inner.iterations;
    out.parameters = inner.parameters;
    const double e_state = inner.energy;
    out.energy_trace.push_back(e_state);
    out.energy = e_state;
    if (n_kappa == 0) break;

    const Rdm rdm = model.rdm(out.parameters);
    const Objective f = [&](std::span<const double> kappa) {
      return rdm_energy(rdm, rotate_integrals(ints, rotation_from_angles(kappa, n)));
    };
    const GradientFn g = [&](std::span<const double> kappa) { return central_difference(f, kappa); };
    const auto orb = bfgs_minimize(f, g, std::vector<double>(n_kappa, 0.0), options.orbital);
    std::vector<double> kappa = orb.x;
    double e_orb = orb.value;
    for (int halving = 0; e_orb > e_state + 1e-9 && halving < 30; ++halving) {
      std::cerr << "warning: orbital step raised the energy; halving the step\n";
      for (double& k : kappa) k *= 0.5;
      e_orb = f(kappa);
    }
    if (e_orb > e_state + 1e-9) {
      kappa.assign(n_kappa, 0.0);
      e_orb = e_state;
    }
    const Eigen::MatrixXd v = rotation_from_angles(kappa, n);
    out.rotation = v * out.rotation;
    ints = rotate_integrals(ints, v);
    out.energy_trace.push_back(e_orb);
    out.energy = e_orb;
    if (std::abs(e_state - e_orb) < options.outer_tol) break;
  }
  out.integrals = std::move(ints);
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
  out << "iteration,energy,gradient_norm\n";
  out.precision(12);
  for (const auto& t : trace) out << t.iteration << ',' << t.energy << ',' << t.gradient_norm << '\n';
}

}  // namespace molcirc
