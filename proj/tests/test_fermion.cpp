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
#include <limits>

#include <catch_amalgamated.hpp>
#include <Eigen/Eigenvalues>

#include "molcirc/errors.hpp"
#include "molcirc/fci.hpp"
#include "molcirc/fermion.hpp"
#include "support.hpp"

using namespace molcirc;
using molcirc::test::h_chain;

namespace {

double norm_of(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

MolecularIntegrals one_orbital(double eps, double u, double offset) {
  MolecularIntegrals ints;
  ints.h = Eigen::MatrixXd::Constant(1, 1, eps);
  ints.g = TwoElectronTensor(1);
  ints.g(0, 0, 0, 0) = u;
  ints.e_offset = offset;
  ints.coefficients = Eigen::MatrixXd::Identity(1, 1);
  ints.n_electrons = 2;
  return ints;
}

}  // namespace

// Ladder operators

TEST_CASE("number operator of mode 0") {
  const FermionTerm t{{create(0), annihilate(0)}};
  PauliSum expected;
  expected.add(PauliString(), 0.5);
  expected.add(PauliString::parse("Z0"), -0.5);
  CHECK(jordan_wigner(t) == expected);
}

TEST_CASE("annihilator of mode 0") {
  PauliSum expected;
  expected.add(PauliString::parse("X0"), 0.5);
  expected.add(PauliString::parse("Y0"), Complex(0, 0.5));
  CHECK(jordan_wigner(annihilate(0)) == expected);
  // a|1> = |0> with |1> occupied.
  const auto m = jordan_wigner(annihilate(0)).matrix(1);
  CHECK(std::abs(m(0, 1) - Complex(1)) < 1e-15);
  CHECK(std::abs(m(1, 0)) < 1e-15);
}

TEST_CASE("anticommutation relations on dense matrices") {
  for (int n : {4, 6}) {
    std::vector<Eigen::MatrixXcd> a;
    std::vector<Eigen::MatrixXcd> ad;
    for (int j = 0; j < n; ++j) {
      a.push_back(jordan_wigner(annihilate(j)).matrix(n));
      ad.push_back(jordan_wigner(create(j)).matrix(n));
      CHECK(norm_of(ad.back() - a.back().adjoint()) < 1e-12);
    }
    const auto id = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(norm_of(a[i] * a[j] + a[j] * a[i]) < 1e-12);
        CHECK(norm_of(ad[i] * ad[j] + ad[j] * ad[i]) < 1e-12);
        CHECK(norm_of(a[i] * ad[j] + ad[j] * a[i] - (i == j ? Eigen::MatrixXcd(id) : Eigen::MatrixXcd::Zero(1 << n, 1 << n))) <
              1e-12);
      }
  }
}

TEST_CASE("JW terms multiply as operator products") {
  const FermionTerm t{{create(2), annihilate(0), create(1)}, Complex(0.3, -0.1)};
  const Eigen::MatrixXcd expected = t.coeff * jordan_wigner(create(2)).matrix(3) *
                                    jordan_wigner(annihilate(0)).matrix(3) * jordan_wigner(create(1)).matrix(3);
  CHECK(norm_of(jordan_wigner(t).matrix(3) - expected) < 1e-14);
}

// Hamiltonian

TEST_CASE("one-orbital Hamiltonian") {
  const double eps = -0.7;
  const auto h = build_qubit_hamiltonian(one_orbital(eps, 0.0, 0.0));
  PauliSum expected;
  expected.add(PauliString(), eps);
  expected.add(PauliString::parse("Z0"), -eps / 2);
  expected.add(PauliString::parse("Z1"), -eps / 2);
  CHECK(h == expected);
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h.matrix(2)).eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size());
  CHECK(std::abs(ev(0) - 2 * eps) < 1e-14);
  CHECK(std::abs(ev(1) - eps) < 1e-14);
  CHECK(std::abs(ev(2) - eps) < 1e-14);
  CHECK(std::abs(ev(3)) < 1e-14);
}

TEST_CASE("zero integrals give the offset times identity") {
  const auto h = build_qubit_hamiltonian(one_orbital(0.0, 0.0, 1.25));
  CHECK(h == PauliSum::identity(1.25));
}

TEST_CASE("non-finite integrals are rejected") {
  CHECK_THROWS_AS(build_qubit_hamiltonian(one_orbital(std::numeric_limits<double>::quiet_NaN(), 0, 0)),
                  NumericalError);
}

TEST_CASE("H2 Hamiltonian minimum in the two-electron sector is the FCI energy") {
  const auto atoms = h_chain(2, 0.74);
  const auto ints = compute_sto3g_integrals(atoms);
  const auto h = build_qubit_hamiltonian(ints);
  CHECK(h.max_imaginary() < 1e-12);
  const Eigen::MatrixXcd m = h.matrix(4);
  std::vector<Eigen::Index> sector;
  for (Eigen::Index b = 0; b < 16; ++b)
    if (std::popcount(static_cast<unsigned>(b)) == 2) sector.push_back(b);
  Eigen::MatrixXcd sub(sector.size(), sector.size());
  for (std::size_t i = 0; i < sector.size(); ++i)
    for (std::size_t j = 0; j < sector.size(); ++j) sub(i, j) = m(sector[i], sector[j]);
  const double e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(sub).eigenvalues()(0);
  CHECK(std::abs(e - fci_ground_state(ints).energy) < 1e-10);
}

TEST_CASE("H4 Hamiltonian is Hermitian and conserves number and spin") {
  const auto atoms = h_chain(4, 1.5);
  const auto h = build_qubit_hamiltonian(compute_sto3g_integrals(atoms));
  CHECK(h.max_imaginary() < 1e-12);
  CHECK(h.commutator(number_operator(8)).max_abs() < 1e-12);
  CHECK(h.commutator(sz_operator(8)).max_abs() < 1e-12);
}

// Generators

TEST_CASE("single-excitation generator has weight-3 strings") {
  const auto g = excitation_generator({ExcitationKind::Single, 0, 1});
  CHECK(g.size() == 4);
  bool xzy = false;
  bool yzx = false;
  for (const auto& [p, c] : g.terms()) {
    CHECK(p.weight() == 3);
    CHECK(std::abs(c.imag()) < 1e-15);
    xzy = xzy || p.str() == "X0 Z1 Y2" || p.str() == "X1 Z2 Y3";
    yzx = yzx || p.str() == "Y0 Z1 X2" || p.str() == "Y1 Z2 X3";
  }
  CHECK(xzy);
  CHECK(yzx);
}

TEST_CASE("pair generator is i times a real antisymmetric matrix") {
  const auto g = excitation_generator({ExcitationKind::PairDouble, 1, 2});
  CHECK(g.is_hermitian());
  const Eigen::MatrixXcd m = g.matrix(8);
  CHECK(m.real().cwiseAbs().maxCoeff() < 1e-14);
  CHECK((m.imag() + m.imag().transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(m.imag().cwiseAbs().maxCoeff() > 0.5);
}

TEST_CASE("generators are Hermitian and conserve number and spin") {
  const auto n = number_operator(8);
  const auto sz = sz_operator(8);
  for (auto kind : {ExcitationKind::Single, ExcitationKind::PairDouble})
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        if (i == j) continue;
        const auto g = excitation_generator({kind, i, j});
        CHECK(g.is_hermitian());
        CHECK(g.commutator(n).max_abs() < 1e-12);
        CHECK(g.commutator(sz).max_abs() < 1e-12);
      }
}

TEST_CASE("generator on equal orbitals is rejected") {
  CHECK_THROWS_AS(excitation_generator({ExcitationKind::Single, 1, 1}), InputError);
  CHECK_THROWS_AS(excitation_generator({ExcitationKind::PairDouble, 0, 0}), InputError);
}
