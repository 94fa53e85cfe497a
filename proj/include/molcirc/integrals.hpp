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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "molcirc/graph.hpp"

namespace molcirc {

/// Angstrom per bohr.
inline constexpr double kBohrAngstrom = 0.52917721092;

/// Real two-electron integrals (pq|rs) in chemists' notation, dense n^4 storage.
class TwoElectronTensor {
 public:
  TwoElectronTensor() = default;
  explicit TwoElectronTensor(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }

  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[index(p, q, r, s)];
  }
  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[index(p, q, r, s)];
  }

  /// Writes `value` into all eight permutationally equivalent slots.
  void set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
                     double value);

  /// Largest deviation from 8-fold permutational symmetry.
  double symmetry_defect() const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

 private:
  std::size_t index(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return ((p * n_ + q) * n_ + r) * n_ + s;
  }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Spin-restricted molecular integrals over an orthonormal orbital set.
///
/// `coefficients` has one row per current orbital, expressed over the
/// orthonormalized atomic basis the integrals were generated in.
struct MolecularIntegrals {
  Eigen::MatrixXd h;
  TwoElectronTensor g;
  double e_offset = 0.0;
  Eigen::MatrixXd coefficients;
  int n_electrons = 0;
  int two_sz = 0;

  std::size_t n_orbitals() const { return static_cast<std::size_t>(h.rows()); }

  /// Throws NumericalError on non-finite entries and InputError on shape mismatch.
  void check() const;
};

/// Contracted s-type Gaussian. Centre in bohr. Coefficients multiply
/// normalized primitives; the contraction is normalized on construction.
struct GaussianShell {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  std::vector<double> exponents;
  std::vector<double> coefficients;

  GaussianShell(const Eigen::Vector3d& center, std::vector<double> exponents,
                std::vector<double> coefficients);

  /// Primitive weight including the primitive normalization (2a/pi)^(3/4).
  double weight(std::size_t k) const { return weights_[k]; }

 private:
  std::vector<double> weights_;
};

/// F0(t) = 1/2 sqrt(pi/t) erf(sqrt(t)), with F0(0) = 1.
double boys_f0(double t);

/// STO-3G s-shell for H or He, centred at `center_bohr`.
GaussianShell sto3g_shell(int atomic_number, const Eigen::Vector3d& center_bohr);

struct PointCharge {
  double charge;
  Eigen::Vector3d position;  // bohr
};

/// Raw atomic-orbital integrals over s-shells.
struct AoIntegrals {
  Eigen::MatrixXd overlap;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd nuclear;
  TwoElectronTensor eri;
  double nuclear_repulsion = 0.0;
};

AoIntegrals compute_ao_integrals(std::span<const GaussianShell> shells,
                                 std::span<const PointCharge> nuclei);

/// Integrals over Loewdin-orthonormalized STO-3G orbitals for H/He systems.
/// Coordinates are taken in Angstrom. The total electron count is the sum
/// of nuclear charges (neutral molecule).
MolecularIntegrals compute_sto3g_integrals(std::span<const Atom> atoms);

/// Returns X = S^(-1/2). Throws NumericalError if an eigenvalue of S is below
/// `threshold` (near linear dependence).
Eigen::MatrixXd lowdin_orthonormalize(const Eigen::MatrixXd& overlap,
                                      double threshold = 1e-8);

/// h' = U h U^T, g' transformed on all four indices, C' = U C.
/// Throws InputError unless U^T U = I to 1e-10.
MolecularIntegrals rotate_integrals(const MolecularIntegrals& ints, const Eigen::MatrixXd& u);

/// Folds doubly occupied orbitals into the one-body term and the scalar offset.
MolecularIntegrals freeze_core(const MolecularIntegrals& ints,
                               std::span<const std::size_t> frozen);

MolecularIntegrals read_fcidump(const std::filesystem::path& path);
MolecularIntegrals parse_fcidump(std::istream& in);
void write_fcidump(const MolecularIntegrals& ints, std::ostream& out,
                   double drop_below = 1e-14);
void write_fcidump(const MolecularIntegrals& ints, const std::filesystem::path& path);

}  // namespace molcirc
