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

#include "molcirc/fci.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "molcirc/errors.hpp"

namespace molcirc {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Bit masks with `count` bits set among the first `width` positions.
std::vector<std::uint64_t> combinations(std::size_t width, int count) {
  std::vector<std::uint64_t> out;
  if (count == 0) return {0};
  std::uint64_t v = (std::uint64_t{1} << count) - 1;
  const std::uint64_t limit = std::uint64_t{1} << width;
  while (v < limit) {
    out.push_back(v);
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
  return out;
}

// Spreads bits of a spatial mask onto even (offset 0) or odd (offset 1) positions.
std::uint64_t interleave(std::uint64_t spatial, int offset) {
  std::uint64_t out = 0;
  for (int k = 0; spatial != 0; ++k, spatial >>= 1)
    if (spatial & 1U) out |= std::uint64_t{1} << (2 * k + offset);
  return out;
}

// Applies a single ladder operator in place; returns the sign, 0 if it annihilates.
int ladder(std::uint64_t& det, std::size_t mode, bool dagger) {
  const std::uint64_t bit = std::uint64_t{1} << mode;
  if (static_cast<bool>(det & bit) == dagger) return 0;
  const int sign = (std::popcount(det & (bit - 1)) & 1) ? -1 : 1;
  det ^= bit;
  return sign;
}

}  // namespace

SectorBasis::SectorBasis(std::size_t n_orbitals, int n_up, int n_down) : n_orbitals_(n_orbitals) {
  if (n_up < 0 || n_down < 0 || static_cast<std::size_t>(n_up) > n_orbitals ||
      static_cast<std::size_t>(n_down) > n_orbitals)
    throw InputError("electron counts do not fit the orbital space");
  if (2 * n_orbitals > 64) throw InputError("too many orbitals for the determinant encoding");
  const std::size_t dim = dimension(n_orbitals, n_up, n_down);
  if (dim > kMaxSectorDimension) {
    throw InputError("sector dimension " + std::to_string(dim) + " exceeds the cap of " +
                     std::to_string(kMaxSectorDimension));
  }
  const auto ups = combinations(n_orbitals, n_up);
  const auto downs = combinations(n_orbitals, n_down);
  dets_.reserve(dim);
  for (std::uint64_t d : downs)
    for (std::uint64_t u : ups) dets_.push_back(interleave(u, 0) | interleave(d, 1));
  std::sort(dets_.begin(), dets_.end());
  index_.reserve(dets_.size());
  for (std::size_t i = 0; i < dets_.size(); ++i) index_.emplace(dets_[i], i);
}

long SectorBasis::index(std::uint64_t det) const {
  auto it = index_.find(det);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::size_t SectorBasis::dimension(std::size_t n_orbitals, int n_up, int n_down) {
  if (n_up < 0 || n_down < 0) return 0;
  return binomial(n_orbitals, static_cast<std::size_t>(n_up)) *
         binomial(n_orbitals, static_cast<std::size_t>(n_down));
}

namespace {

// Slater-Condon application of H to every determinant in `dets`; `lookup`
// maps a determinant to its row (negative if outside the space).
template <typename Lookup>
Eigen::SparseMatrix<double> build_hamiltonian(const MolecularIntegrals& ints,
                                              const std::vector<std::uint64_t>& dets,
                                              Lookup lookup) {
  ints.check();
  const std::size_t n = ints.n_orbitals();
  const std::size_t modes = 2 * n;
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<std::size_t> occ;
  for (std::size_t col = 0; col < dets.size(); ++col) {
    const std::uint64_t det = dets[col];
    occ.clear();
    for (std::size_t m = 0; m < modes; ++m)
      if (det >> m & 1U) occ.push_back(m);
    triplets.emplace_back(col, col, ints.e_offset);
    auto emit = [&](std::uint64_t out, double value) {
      if (value == 0.0) return;
      const long row = lookup(out);
      if (row < 0) throw NumericalError("Hamiltonian leaves the sector");
      triplets.emplace_back(static_cast<std::size_t>(row), col, value);
    };
    // One-body: h_pq a+_P a_Q.
    for (std::size_t Q : occ) {
      for (std::size_t p = 0; p < n; ++p) {
        const std::size_t P = 2 * p + Q % 2;
        const double v = ints.h(p, Q / 2);
        if (v == 0.0) continue;
        std::uint64_t d = det;
        int s = ladder(d, Q, false);
        s *= ladder(d, P, true);
        if (s != 0) emit(d, s * v);
      }
    }
    // Two-body: 1/2 (pq|rs) a+_P a+_R a_S a_Q.
    for (std::size_t Q : occ)
      for (std::size_t S : occ) {
        if (S == Q) continue;
        std::uint64_t d0 = det;
        int s0 = ladder(d0, Q, false);
        s0 *= ladder(d0, S, false);
        if (s0 == 0) continue;
        for (std::size_t r = 0; r < n; ++r) {
          const std::size_t R = 2 * r + S % 2;
          std::uint64_t d1 = d0;
          const int s1 = s0 * ladder(d1, R, true);
          if (s1 == 0) continue;
          for (std::size_t p = 0; p < n; ++p) {
            const std::size_t P = 2 * p + Q % 2;
            const double v = ints.g(p, Q / 2, r, S / 2);
            if (v == 0.0) continue;
            std::uint64_t d2 = d1;
            const int s2 = s1 * ladder(d2, P, true);
            if (s2 != 0) emit(d2, 0.5 * s2 * v);
          }
        }
      }
  }
  Eigen::SparseMatrix<double> h(dets.size(), dets.size());
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

}  // namespace

Eigen::SparseMatrix<double> sector_hamiltonian(const MolecularIntegrals& ints,
                                               const SectorBasis& basis) {
  if (basis.n_orbitals() != ints.n_orbitals())
    throw InputError("basis and integrals differ in orbital count");
  return build_hamiltonian(ints, basis.dets(), [&](std::uint64_t d) { return basis.index(d); });
}

Eigen::SparseMatrix<double> fock_hamiltonian(const MolecularIntegrals& ints, int max_qubits) {
  const int n_qubits = static_cast<int>(2 * ints.n_orbitals());
  if (n_qubits > max_qubits) throw InputError("Fock-space Hamiltonian exceeds the qubit cap");
  std::vector<std::uint64_t> dets(std::size_t{1} << n_qubits);
  for (std::size_t i = 0; i < dets.size(); ++i) dets[i] = i;
  return build_hamiltonian(ints, dets, [](std::uint64_t d) { return static_cast<long>(d); });
}

FockObservable::FockObservable(const MolecularIntegrals& ints, int max_qubits)
    : n_qubits_(static_cast<int>(2 * ints.n_orbitals())), h_(fock_hamiltonian(ints, max_qubits)) {}

double FockObservable::expectation(const StateVector& psi) const {
  if (psi.n_qubits() != n_qubits_) throw InputError("state does not match the orbital space");
  const auto& amp = psi.amplitudes();
  Complex acc{};
  for (Eigen::Index col = 0; col < h_.outerSize(); ++col) {
    const Complex a = amp[static_cast<std::size_t>(col)];
    if (a == Complex{}) continue;
    Complex hv{};
    for (Eigen::SparseMatrix<double>::InnerIterator it(h_, col); it; ++it)
      hv += it.value() * std::conj(amp[static_cast<std::size_t>(it.row())]);
    acc += hv * a;
  }
  return acc.real();
}

std::pair<double, Eigen::VectorXd> lanczos_lowest(const Eigen::SparseMatrix<double>& h,
                                                  double tol, int max_iter) {
  const Eigen::Index dim = h.rows();
  if (dim == 0) throw InputError("empty operator");
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start(i) = normal(rng);
  start.normalize();

  double energy = 0.0;
  for (int restart = 0; restart < 20; ++restart) {
    // Keep the Krylov basis below ~400 MB.
    const Eigen::Index mem_cap = std::max<Eigen::Index>(20, 50'000'000 / dim);
    const int m_max = static_cast<int>(std::min({Eigen::Index{max_iter}, dim, mem_cap}));
    Eigen::MatrixXd V(dim, m_max);
    std::vector<double> alpha;
    std::vector<double> beta;
    V.col(0) = start;
    int m = 0;
    for (; m < m_max; ++m) {
      Eigen::VectorXd w = h * V.col(m);
      alpha.push_back(V.col(m).dot(w));
      // Full reorthogonalization (twice for stability).
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(m + 1) * (V.leftCols(m + 1).transpose() * w);
      const double b = w.norm();
      if (m + 1 == m_max || b < 1e-12) {
        ++m;
        break;
      }
      beta.push_back(b);
      V.col(m + 1) = w / b;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      T(k, k) = alpha[k];
      if (k + 1 < m) T(k, k + 1) = T(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    energy = es.eigenvalues()(0);
    Eigen::VectorXd x = V.leftCols(m) * es.eigenvectors().col(0);
    x.normalize();
    const double residual = (h * x - energy * x).norm();
    if (residual < tol) return {energy, x};
    start = x;
  }
  throw NumericalError("Lanczos did not converge");
}

namespace {

SectorBasis make_basis(const MolecularIntegrals& ints, int n_electrons, int two_sz) {
  if ((n_electrons + two_sz) % 2 != 0 || std::abs(two_sz) > n_electrons)
    throw InputError("inconsistent electron count and spin projection");
  return SectorBasis(ints.n_orbitals(), (n_electrons + two_sz) / 2, (n_electrons - two_sz) / 2);
}

}  // namespace

SectorObservable::SectorObservable(const MolecularIntegrals& ints, int n_electrons, int two_sz)
    : basis_(make_basis(ints, n_electrons, two_sz)), h_(sector_hamiltonian(ints, basis_)) {}

double SectorObservable::expectation(const StateVector& psi) const {
  if (psi.n_qubits() != static_cast<int>(2 * basis_.n_orbitals()))
    throw InputError("state does not match the orbital space");
  const Eigen::Index dim = static_cast<Eigen::Index>(basis_.size());
  Eigen::VectorXcd v(dim);
  double inside = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = psi[basis_.det(static_cast<std::size_t>(i))];
    inside += std::norm(v(i));
  }
  const double total = psi.norm() * psi.norm();
  if (total - inside > 1e-10) throw NumericalError("state leaks out of the Hamiltonian sector");
  const Eigen::VectorXcd hv = h_ * v;
  return v.dot(hv).real();
}

FciResult fci_ground_state(const MolecularIntegrals& ints, int n_electrons, int two_sz,
                           int max_qubits) {
  const SectorBasis basis = make_basis(ints, n_electrons, two_sz);
  const auto h = sector_hamiltonian(ints, basis);

  FciResult out;
  out.sector_dimension = basis.size();
  if (basis.size() <= kDenseSectorLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(h)};
    if (es.info() != Eigen::Success) throw NumericalError("FCI diagonalization failed");
    out.energy = es.eigenvalues()(0);
    Eigen::Index k = 1;
    while (k < es.eigenvalues().size() && es.eigenvalues()(k) - out.energy < 1e-8) ++k;
    out.sector_vectors = es.eigenvectors().leftCols(k);
  } else {
    auto [e, v] = lanczos_lowest(h);
    out.energy = e;
    out.sector_vectors = v;
  }
  const int n_qubits = static_cast<int>(2 * ints.n_orbitals());
  if (n_qubits <= max_qubits) {
    for (Eigen::Index c = 0; c < out.sector_vectors.cols(); ++c) {
      StateVector psi(n_qubits, 0, max_qubits);
      psi.amplitudes()[0] = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i)
        psi.amplitudes()[basis.det(i)] = out.sector_vectors(static_cast<Eigen::Index>(i), c);
      out.states.push_back(std::move(psi));
    }
  }
  return out;
}

}  // namespace molcirc
