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

#include "molcirc/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

#include "molcirc/errors.hpp"

namespace molcirc {

namespace {

constexpr double kPi = std::numbers::pi;

// STO-3G (Hehre, Stewart, Pople 1969), as distributed by the Basis Set Exchange.
constexpr std::array<double, 3> kSto3gCoefficients = {0.15432897, 0.53532814, 0.44463454};
constexpr std::array<double, 3> kSto3gHydrogen = {3.42525091, 0.62391373, 0.16885540};
constexpr std::array<double, 3> kSto3gHelium = {6.36242139, 1.15892300, 0.31364979};

double primitive_overlap(double a, double b, double r2) {
  const double p = a + b;
  return std::pow(kPi / p, 1.5) * std::exp(-a * b / p * r2);
}

double primitive_kinetic(double a, double b, double r2) {
  const double mu = a * b / (a + b);
  return mu * (3.0 - 2.0 * mu * r2) * primitive_overlap(a, b, r2);
}

double primitive_nuclear(double a, const Eigen::Vector3d& ra, double b,
                         const Eigen::Vector3d& rb, const PointCharge& c) {
  const double p = a + b;
  const Eigen::Vector3d rp = (a * ra + b * rb) / p;
  const double r2 = (ra - rb).squaredNorm();
  return -c.charge * 2.0 * kPi / p * std::exp(-a * b / p * r2) *
         boys_f0(p * (rp - c.position).squaredNorm());
}

double primitive_eri(double a, const Eigen::Vector3d& ra, double b, const Eigen::Vector3d& rb,
                     double c, const Eigen::Vector3d& rc, double d,
                     const Eigen::Vector3d& rd) {
  const double p = a + b;
  const double q = c + d;
  const Eigen::Vector3d rp = (a * ra + b * rb) / p;
  const Eigen::Vector3d rq = (c * rc + d * rd) / q;
  const double pref = 2.0 * std::pow(kPi, 2.5) / (p * q * std::sqrt(p + q));
  return pref * std::exp(-a * b / p * (ra - rb).squaredNorm() - c * d / q * (rc - rd).squaredNorm()) *
         boys_f0(p * q / (p + q) * (rp - rq).squaredNorm());
}

template <typename F>
double contract2(const GaussianShell& sa, const GaussianShell& sb, F&& prim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.exponents.size(); ++i) {
    for (std::size_t j = 0; j < sb.exponents.size(); ++j) {
      sum += sa.weight(i) * sb.weight(j) * prim(sa.exponents[i], sb.exponents[j]);
    }
  }
  return sum;
}

void check_orthogonal(const Eigen::MatrixXd& u, std::size_t n, const char* who) {
  if (static_cast<std::size_t>(u.rows()) != n || static_cast<std::size_t>(u.cols()) != n) {
    throw InputError(std::string(who) + ": rotation has wrong shape");
  }
  const double defect =
      (u.transpose() * u - Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw InputError(std::string(who) + ": matrix is not orthogonal (defect " +
                     std::to_string(defect) + ")");
  }
}

}  // namespace

void TwoElectronTensor::set_symmetric(std::size_t p, std::size_t q, std::size_t r,
                                      std::size_t s, double value) {
  for (auto [a, b, c, d] : {std::array{p, q, r, s}, std::array{q, p, r, s},
                            std::array{p, q, s, r}, std::array{q, p, s, r},
                            std::array{r, s, p, q}, std::array{s, r, p, q},
                            std::array{r, s, q, p}, std::array{s, r, q, p}}) {
    (*this)(a, b, c, d) = value;
  }
}

double TwoElectronTensor::symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t q = 0; q < n_; ++q)
      for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t s = 0; s < n_; ++s) {
          const double v = (*this)(p, q, r, s);
          worst = std::max({worst, std::abs(v - (*this)(q, p, r, s)),
                            std::abs(v - (*this)(p, q, s, r)),
                            std::abs(v - (*this)(r, s, p, q))});
        }
  return worst;
}

void MolecularIntegrals::check() const {
  const auto n = n_orbitals();
  if (static_cast<std::size_t>(h.cols()) != n || g.dim() != n) {
    throw InputError("integral dimensions are inconsistent");
  }
  if (!h.allFinite() || !std::isfinite(e_offset) ||
      !std::all_of(g.data().begin(), g.data().end(), [](double v) { return std::isfinite(v); })) {
    throw NumericalError("integrals contain NaN or Inf");
  }
}

GaussianShell::GaussianShell(const Eigen::Vector3d& c, std::vector<double> exps,
                             std::vector<double> coefs)
    : center(c), exponents(std::move(exps)), coefficients(std::move(coefs)) {
  if (exponents.size() != coefficients.size() || exponents.empty()) {
    throw InputError("Gaussian shell needs matching, non-empty exponent/coefficient lists");
  }
  weights_.resize(exponents.size());
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (!(exponents[k] > 0.0)) throw InputError("Gaussian exponents must be positive");
    weights_[k] = coefficients[k] * std::pow(2.0 * exponents[k] / kPi, 0.75);
  }
  double self = 0.0;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    for (std::size_t j = 0; j < exponents.size(); ++j)
      self += weights_[i] * weights_[j] * primitive_overlap(exponents[i], exponents[j], 0.0);
  const double scale = 1.0 / std::sqrt(self);
  for (double& w : weights_) w *= scale;
}

double boys_f0(double t) {
  if (t < 0.0) throw InputError("boys_f0: negative argument");
  if (t < 1e-3) {
    // Taylor series sum_k (-t)^k / (k! (2k+1)); the erf form loses digits here.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 8; ++k) {
      term *= -t / k;
      sum += term / (2 * k + 1);
    }
    return sum;
  }
  const double st = std::sqrt(t);
  return 0.5 * std::sqrt(kPi / t) * std::erf(st);
}

GaussianShell sto3g_shell(int atomic_number, const Eigen::Vector3d& center_bohr) {
  const std::array<double, 3>* exps = nullptr;
  if (atomic_number == 1) exps = &kSto3gHydrogen;
  if (atomic_number == 2) exps = &kSto3gHelium;
  if (exps == nullptr) {
    throw UnsupportedElementError(
        "built-in STO-3G integrals support H and He only; supply integrals for " +
        std::string(element_symbol(atomic_number)) + " through an FCIDUMP file");
  }
  return GaussianShell(center_bohr, {exps->begin(), exps->end()},
                       {kSto3gCoefficients.begin(), kSto3gCoefficients.end()});
}

AoIntegrals compute_ao_integrals(std::span<const GaussianShell> shells,
                                 std::span<const PointCharge> nuclei) {
  const std::size_t n = shells.size();
  AoIntegrals out;
  out.overlap = Eigen::MatrixXd::Zero(n, n);
  out.kinetic = Eigen::MatrixXd::Zero(n, n);
  out.nuclear = Eigen::MatrixXd::Zero(n, n);
  out.eri = TwoElectronTensor(n);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& a = shells[i];
      const auto& b = shells[j];
      const double r2 = (a.center - b.center).squaredNorm();
      const double s = contract2(a, b, [&](double x, double y) { return primitive_overlap(x, y, r2); });
      const double t = contract2(a, b, [&](double x, double y) { return primitive_kinetic(x, y, r2); });
      double v = 0.0;
      for (const auto& c : nuclei) {
        v += contract2(a, b, [&](double x, double y) {
          return primitive_nuclear(x, a.center, y, b.center, c);
        });
      }
      out.overlap(i, j) = out.overlap(j, i) = s;
      out.kinetic(i, j) = out.kinetic(j, i) = t;
      out.nuclear(i, j) = out.nuclear(j, i) = v;
    }
  }

  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= (r == p ? q : r); ++s) {
          const auto& A = shells[p];
          const auto& B = shells[q];
          const auto& C = shells[r];
          const auto& D = shells[s];
          double sum = 0.0;
          for (std::size_t i = 0; i < A.exponents.size(); ++i)
            for (std::size_t j = 0; j < B.exponents.size(); ++j)
              for (std::size_t k = 0; k < C.exponents.size(); ++k)
                for (std::size_t l = 0; l < D.exponents.size(); ++l)
                  sum += A.weight(i) * B.weight(j) * C.weight(k) * D.weight(l) *
                         primitive_eri(A.exponents[i], A.center, B.exponents[j], B.center,
                                       C.exponents[k], C.center, D.exponents[l], D.center);
          out.eri.set_symmetric(p, q, r, s, sum);
        }

  for (std::size_t a = 0; a < nuclei.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      out.nuclear_repulsion += nuclei[a].charge * nuclei[b].charge /
                               (nuclei[a].position - nuclei[b].position).norm();
  return out;
}

Eigen::MatrixXd lowdin_orthonormalize(const Eigen::MatrixXd& overlap, double threshold) {
  if (overlap.rows() != overlap.cols()) throw InputError("overlap matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(overlap);
  if (eig.info() != Eigen::Success) throw NumericalError("overlap diagonalization failed");
  const Eigen::VectorXd& w = eig.eigenvalues();
  if (w.size() > 0 && w.minCoeff() < threshold) {
    throw NumericalError("overlap matrix is nearly linearly dependent (smallest eigenvalue " +
                         std::to_string(w.minCoeff()) + ")");
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  return v * w.cwiseInverse().cwiseSqrt().asDiagonal() * v.transpose();
}

namespace {

// out(p,q,r,s) = sum_i M(p,i) in(i,q,r,s), cycled over all four slots.
TwoElectronTensor transform_eri(const TwoElectronTensor& g, const Eigen::MatrixXd& m) {
  const std::size_t n = g.dim();
  TwoElectronTensor a(n), b(n);
  auto pass = [&](const TwoElectronTensor& in, TwoElectronTensor& out) {
    // Transform the first index and rotate slots left: out(q,r,s,p') = sum_i m(p',i) in(i,q,r,s).
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          for (std::size_t p = 0; p < n; ++p) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += m(p, i) * in(i, q, r, s);
            out(q, r, s, p) = sum;
          }
  };
  pass(g, a);
  pass(a, b);
  pass(b, a);
  pass(a, b);
  return b;
}

}  // namespace

MolecularIntegrals rotate_integrals(const MolecularIntegrals& ints, const Eigen::MatrixXd& u) {
  check_orthogonal(u, ints.n_orbitals(), "rotate_integrals");
  MolecularIntegrals out = ints;
  out.h = u * ints.h * u.transpose();
  out.g = transform_eri(ints.g, u);
  out.coefficients = u * ints.coefficients;
  return out;
}

MolecularIntegrals freeze_core(const MolecularIntegrals& ints,
                               std::span<const std::size_t> frozen) {
  const std::size_t n = ints.n_orbitals();
  std::set<std::size_t> frozen_set(frozen.begin(), frozen.end());
  if (frozen_set.size() != frozen.size()) throw InputError("freeze_core: duplicate indices");
  if (frozen.empty()) return ints;
  for (std::size_t f : frozen_set) {
    if (f >= n) throw InputError("freeze_core: orbital index out of range");
  }
  if (ints.n_electrons < 2 * static_cast<int>(frozen.size())) {
    throw InputError("freeze_core: more frozen electrons than electrons");
  }

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < n; ++k) {
    if (!frozen_set.count(k)) active.push_back(k);
  }
  const std::size_t m = active.size();

  MolecularIntegrals out;
  out.e_offset = ints.e_offset;
  for (std::size_t f : frozen_set) {
    out.e_offset += 2.0 * ints.h(f, f);
    for (std::size_t f2 : frozen_set) {
      out.e_offset += 2.0 * ints.g(f, f, f2, f2) - ints.g(f, f2, f2, f);
    }
  }

  out.h = Eigen::MatrixXd(m, m);
  out.g = TwoElectronTensor(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t k = active[a], l = active[b];
      double v = ints.h(k, l);
      for (std::size_t f : frozen_set) v += 2.0 * ints.g(k, l, f, f) - ints.g(k, f, f, l);
      out.h(a, b) = v;
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d < m; ++d) out.g(a, b, c, d) = ints.g(k, l, active[c], active[d]);
    }
  }
  out.coefficients = Eigen::MatrixXd(m, ints.coefficients.cols());
  for (std::size_t a = 0; a < m; ++a) out.coefficients.row(a) = ints.coefficients.row(active[a]);
  out.n_electrons = ints.n_electrons - 2 * static_cast<int>(frozen.size());
  out.two_sz = ints.two_sz;
  return out;
}

MolecularIntegrals compute_sto3g_integrals(std::span<const Atom> atoms) {
  if (atoms.empty()) throw InputError("no atoms given");
  std::vector<GaussianShell> shells;
  std::vector<PointCharge> nuclei;
  int electrons = 0;
  for (const auto& atom : atoms) {
    const Eigen::Vector3d r = atom.position / kBohrAngstrom;
    shells.push_back(sto3g_shell(atom.atomic_number, r));
    nuclei.push_back({static_cast<double>(atom.atomic_number), r});
    electrons += atom.atomic_number;
  }
  const AoIntegrals ao = compute_ao_integrals(shells, nuclei);
  const Eigen::MatrixXd x = lowdin_orthonormalize(ao.overlap);
  const std::size_t n = shells.size();

  MolecularIntegrals out;
  out.h = x.transpose() * (ao.kinetic + ao.nuclear) * x;
  out.h = 0.5 * (out.h + out.h.transpose()).eval();
  out.g = transform_eri(ao.eri, x.transpose());
  out.e_offset = ao.nuclear_repulsion;
  out.coefficients = Eigen::MatrixXd::Identity(n, n);
  out.n_electrons = electrons;
  out.two_sz = electrons % 2;
  return out;
}

}  // namespace molcirc
