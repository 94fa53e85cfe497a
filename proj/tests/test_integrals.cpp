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
#include <fstream>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>
#include <Eigen/Eigenvalues>

#include "molcirc/errors.hpp"
#include "molcirc/fci.hpp"
#include "molcirc/integrals.hpp"
#include "support.hpp"

using namespace molcirc;
using namespace molcirc::test;
using Catch::Matchers::WithinAbs;

namespace {

nlohmann::json reference() {
  std::ifstream in(data_file("reference.json"));
  return nlohmann::json::parse(in);
}

double max_diff(const MolecularIntegrals& a, const MolecularIntegrals& b) {
  double d = (a.h - b.h).cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < a.g.data().size(); ++k) d = std::max(d, std::abs(a.g.data()[k] - b.g.data()[k]));
  return d;
}

// F0(t) = exp(-t) sum_k (2t)^k / (2k+1)!!, all terms positive.
double boys_series(double t) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 400; ++k) {
    term *= 2.0 * t / (2.0 * k + 1.0);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(-t) * sum;
}

// 1D trapezoid of a Gaussian product; spectrally accurate on a wide grid.
double overlap_1d(double a, double xa, double b, double xb) {
  const double lo = std::min(xa, xb) - 12.0;
  const double hi = std::max(xa, xb) + 12.0;
  const int n = 6000;
  const double h = (hi - lo) / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = lo + k * h;
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    s += w * std::exp(-a * (x - xa) * (x - xa) - b * (x - xb) * (x - xb));
  }
  return s * h;
}

MolecularIntegrals from_fixture(const std::string& name) { return read_fcidump(data_file(name + ".fcidump")); }

}  // namespace

// Boys function

TEST_CASE("Boys function at zero is one") { CHECK(boys_f0(0.0) == 1.0); }

TEST_CASE("Boys function matches the positive series") {
  for (double t = 0.0; t <= 50.0; t += 0.37) CHECK_THAT(boys_f0(t), WithinAbs(boys_series(t), 1e-12));
  for (double t : {1e-14, 1e-10, 1e-6, 1e-3}) CHECK_THAT(boys_f0(t), WithinAbs(boys_series(t), 1e-12));
}

// Gaussians

TEST_CASE("STO-3G shells are normalized") {
  for (int z : {1, 2}) {
    const GaussianShell s = sto3g_shell(z, {0.1, -0.2, 0.3});
    const GaussianShell shells[] = {s};
    const auto ao = compute_ao_integrals(shells, {});
    CHECK_THAT(ao.overlap(0, 0), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("overlap agrees with quadrature of the contracted Gaussians") {
  const Eigen::Vector3d a{0.0, 0.0, 0.0};
  const Eigen::Vector3d b{0.3, -0.4, 1.2};
  const GaussianShell sa = sto3g_shell(1, a);
  const GaussianShell sb = sto3g_shell(2, b);
  double s = 0.0;
  for (std::size_t i = 0; i < sa.exponents.size(); ++i)
    for (std::size_t j = 0; j < sb.exponents.size(); ++j) {
      double p = sa.weight(i) * sb.weight(j);
      for (int d = 0; d < 3; ++d) p *= overlap_1d(sa.exponents[i], a[d], sb.exponents[j], b[d]);
      s += p;
    }
  const GaussianShell shells[] = {sa, sb};
  const auto ao = compute_ao_integrals(shells, {});
  CHECK_THAT(ao.overlap(0, 1), WithinAbs(s, 1e-12));
}

TEST_CASE("unsupported elements point to FCIDUMP") {
  const Atom atoms[] = {Atom::from_symbol("Li", {0, 0, 0}), Atom::from_symbol("H", {0, 0, 1.6})};
  try {
    compute_sto3g_integrals(atoms);
    FAIL("expected an error");
  } catch (const UnsupportedElementError& e) {
    CHECK(std::string(e.what()).find("FCIDUMP") != std::string::npos);
  }
}

// Molecular integrals against the PySCF fixtures

TEST_CASE("single hydrogen atom") {
  const auto atoms = h_chain(1, 0.0);
  const auto ints = compute_sto3g_integrals(atoms);
  CHECK(ints.n_orbitals() == 1);
  CHECK(ints.g(0, 0, 0, 0) > 0.0);
  CHECK(ints.e_offset == 0.0);
  CHECK(ints.n_electrons == 1);
  CHECK(ints.two_sz == 1);
}

TEST_CASE("integrals and FCI energies match the reference fixtures") {
  const auto ref = reference();
  struct Case {
    std::string name;
    std::vector<Atom> atoms;
  };
  const std::vector<Case> cases{
      {"h2_074", h_chain(2, 0.74)},
      {"h2_250", h_chain(2, 2.5)},
      {"h3_150", h_chain(3, 1.5)},
      {"h4_150", h_chain(4, 1.5)},
      {"h6_150", h_chain(6, 1.5)},
      {"heh_plus", {Atom::from_symbol("He", {0, 0, 0}), Atom::from_symbol("H", {0, 0, 0.9})}},
  };
  for (const auto& c : cases) {
    INFO(c.name);
    auto ints = compute_sto3g_integrals(c.atoms);
    const auto fixture = from_fixture(c.name);
    const auto& r = ref.at(c.name);
    ints.n_electrons = r.at("n_electrons").get<int>();
    ints.two_sz = r.at("two_sz").get<int>();
    CHECK(max_diff(ints, fixture) < 1e-8);
    CHECK_THAT(ints.e_offset, WithinAbs(r.at("nuclear_repulsion").get<double>(), 1e-10));
    CHECK_THAT(fci_ground_state(ints).energy, WithinAbs(r.at("fci").get<double>(), 1e-6));
    CHECK_THAT(fci_ground_state(fixture).energy, WithinAbs(r.at("fci").get<double>(), 1e-8));
  }
}

TEST_CASE("integrals carry 8-fold symmetry") {
  for (double d : {0.4, 0.74, 1.9, 4.0}) {
    const auto atoms = h_chain(3, d);
    const auto ints = compute_sto3g_integrals(atoms);
    CHECK((ints.h - ints.h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ints.g.symmetry_defect() < 1e-12);
    CHECK((ints.coefficients * ints.coefficients.transpose() - Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

// Loewdin

TEST_CASE("Loewdin of the identity is the identity") {
  const auto x = lowdin_orthonormalize(Eigen::MatrixXd::Identity(3, 3));
  CHECK((x - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Loewdin orthonormalizes a two-function overlap") {
  for (double s : {0.1, 0.5, 0.9, -0.7}) {
    Eigen::MatrixXd m(2, 2);
    m << 1, s, s, 1;
    const auto x = lowdin_orthonormalize(m);
    CHECK((x.transpose() * m * x - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((x - x.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    CHECK_THAT(es.eigenvalues().minCoeff(), WithinAbs(1.0 / std::sqrt(1 + std::abs(s)), 1e-12));
    CHECK_THAT(es.eigenvalues().maxCoeff(), WithinAbs(1.0 / std::sqrt(1 - std::abs(s)), 1e-12));
  }
}

TEST_CASE("near-linear dependence is rejected") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 1 - 1e-10, 1 - 1e-10, 1;
  CHECK_THROWS_AS(lowdin_orthonormalize(m), NumericalError);
}

// FCIDUMP

TEST_CASE("handcrafted one-orbital FCIDUMP") {
  std::istringstream in("&FCI NORB=1,NELEC=2,MS2=0,\n ORBSYM=1,\n ISYM=1,\n&END\n"
                        " 0.7 1 1 1 1\n -1.0 1 1 0 0\n 0.5 0 0 0 0\n");
  const auto ints = parse_fcidump(in);
  CHECK(ints.n_orbitals() == 1);
  CHECK(ints.h(0, 0) == -1.0);
  CHECK(ints.g(0, 0, 0, 0) == 0.7);
  CHECK(ints.e_offset == 0.5);
  CHECK(ints.n_electrons == 2);
  CHECK_THAT(fci_ground_state(ints).energy, WithinAbs(2 * -1.0 + 0.7 + 0.5, 1e-12));
}

TEST_CASE("FCIDUMP records fill every symmetric slot") {
  std::istringstream in("&FCI NORB=2,NELEC=2,MS2=0,\n/\n 0.25 1 2 1 2\n 0.1 2 1 1 1\n");
  const auto ints = parse_fcidump(in);
  CHECK(ints.g(0, 1, 0, 1) == 0.25);
  CHECK(ints.g(1, 0, 1, 0) == 0.25);
  CHECK(ints.g(1, 0, 0, 1) == 0.25);
  CHECK(ints.g(0, 1, 1, 0) == 0.25);
  CHECK(ints.g(0, 0, 1, 0) == 0.1);
  CHECK(ints.g(0, 0, 0, 1) == 0.1);
  CHECK(ints.g(1, 0, 0, 0) == 0.1);
  CHECK(ints.g(0, 1, 0, 0) == 0.1);
  CHECK(ints.g(0, 0, 1, 1) == 0.0);
}

TEST_CASE("FCIDUMP round trip reproduces the integrals") {
  const auto atoms = h_chain(2, 0.74);
  const auto ints = compute_sto3g_integrals(atoms);
  std::stringstream buf;
  write_fcidump(ints, buf);
  const auto back = parse_fcidump(buf);
  CHECK(max_diff(ints, back) < 1e-12);
  CHECK_THAT(back.e_offset, WithinAbs(ints.e_offset, 1e-12));
  CHECK(back.n_electrons == ints.n_electrons);
  CHECK(back.two_sz == ints.two_sz);
}

TEST_CASE("FCIDUMP errors report the line") {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_fcidump(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("&FCI NORB=1,NELEC=2,\n&END\n 0.5 1 1 1 1\n 0.1 1 2 0 0\n") == 4);
  CHECK(line_of("&FCI NORB=1,NELEC=2,\n&END\n 0.5 1 1 x 1\n") == 3);
  CHECK(line_of("&FCI NORB=1,NELEC=2,\n&END\n abc 1 1 1 1\n") == 3);
  CHECK(line_of("&FCI NELEC=2,\n&END\n") == 2);  // header closes on line 2
  CHECK(line_of("garbage\n") == 1);
}

// Rotation

TEST_CASE("identity rotation leaves integrals unchanged") {
  const auto atoms = h_chain(3, 1.1);
  const auto ints = compute_sto3g_integrals(atoms);
  const auto r = rotate_integrals(ints, Eigen::MatrixXd::Identity(3, 3));
  CHECK(max_diff(ints, r) < 1e-14);
  CHECK(r.e_offset == ints.e_offset);
}

TEST_CASE("bonding frame diagonalizes H2") {
  const auto atoms = h_chain(2, 0.74);
  const auto ints = compute_sto3g_integrals(atoms);
  Eigen::MatrixXd u(2, 2);
  u << 1, 1, 1, -1;
  u /= std::sqrt(2.0);
  const auto r = rotate_integrals(ints, u);
  CHECK(std::abs(r.h(0, 1)) < 1e-12);
  CHECK(r.h(0, 0) < r.h(1, 1));
  CHECK((r.coefficients - u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rotation round trip and symmetry") {
  std::mt19937 rng(11);
  const auto atoms = h_chain(4, 1.3);
  const auto ints = compute_sto3g_integrals(atoms);
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = random_orthogonal(4, rng);
    const auto r = rotate_integrals(ints, u);
    CHECK(r.g.symmetry_defect() < 1e-12);
    CHECK((r.h - r.h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const auto back = rotate_integrals(r, u.transpose());
    CHECK(max_diff(ints, back) < 1e-10);
    CHECK((back.coefficients - ints.coefficients).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("non-orthogonal rotations are rejected") {
  const auto atoms = h_chain(2, 0.74);
  const auto ints = compute_sto3g_integrals(atoms);
  Eigen::MatrixXd u(2, 2);
  u << 1, 0.1, 0, 1;
  CHECK_THROWS_AS(rotate_integrals(ints, u), InputError);
  CHECK_THROWS_AS(rotate_integrals(ints, Eigen::MatrixXd::Identity(3, 3)), InputError);
}

// Frozen core

TEST_CASE("freezing nothing is the identity") {
  const auto atoms = h_chain(2, 0.74);
  const auto ints = compute_sto3g_integrals(atoms);
  const auto f = freeze_core(ints, {});
  CHECK(max_diff(ints, f) < 1e-15);
  CHECK(f.e_offset == ints.e_offset);
  CHECK(f.n_electrons == ints.n_electrons);
}

TEST_CASE("frozen-core FCI equals FCI restricted to a doubly occupied orbital") {
  std::mt19937 rng(5);
  const auto atoms = h_chain(4, 1.2);
  const auto ints = rotate_integrals(compute_sto3g_integrals(atoms), random_orthogonal(4, rng));
  for (std::size_t frozen : {0u, 2u}) {
    const std::size_t fz[] = {frozen};
    const auto active = freeze_core(ints, fz);
    CHECK(active.n_orbitals() == 3);
    CHECK(active.n_electrons == 2);

    const SectorBasis basis(4, 2, 2);
    const Eigen::MatrixXd h(sector_hamiltonian(ints, basis));
    std::vector<Eigen::Index> keep;
    const std::uint64_t mask = std::uint64_t{3} << (2 * frozen);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if ((basis.det(i) & mask) == mask) keep.push_back(static_cast<Eigen::Index>(i));
    Eigen::MatrixXd sub(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j) sub(i, j) = h(keep[i], keep[j]);
    const double restricted = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sub).eigenvalues()(0);
    CHECK_THAT(fci_ground_state(active).energy, WithinAbs(restricted, 1e-10));
  }
}

TEST_CASE("LiH frozen-core error is below a millihartree") {
  const auto ref = reference().at("lih_160");
  const auto ints = from_fixture("lih_160");
  const double full = fci_ground_state(ints).energy;
  CHECK_THAT(full, WithinAbs(ref.at("fci").get<double>(), 1e-8));
  const std::size_t fz[] = {0};
  const auto frozen = freeze_core(ints, fz);
  const double e = fci_ground_state(frozen).energy;
  CHECK(e >= full - 1e-10);
  CHECK(error_millihartree(e, full) < 1.0);
}

TEST_CASE("invalid frozen lists are rejected") {
  const auto atoms = h_chain(4, 1.2);
  const auto ints = compute_sto3g_integrals(atoms);
  const std::size_t dup[] = {0, 0};
  const std::size_t out[] = {4};
  CHECK_THROWS_AS(freeze_core(ints, dup), InputError);
  CHECK_THROWS_AS(freeze_core(ints, out), InputError);
}
