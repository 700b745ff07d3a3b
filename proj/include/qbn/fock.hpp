// Copyright 2026 The qbn Authors
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

// Finite truncation of the Bernoulli-functional space: the canonical basis
// indexed by subsets of {0..n-1}, state vectors, sparse operators and the
// annihilation/creation pair.

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qbn/errors.hpp"

namespace qbn {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr int kMaxModes = 20;
inline constexpr int kMaxSpectralModes = 12;

/// Number of retained modes. Sites are 0..n-1 and the basis has 2^n elements.
class ModeCount {
public:
  explicit ModeCount(int n) : n_(n) {
    if (n < 1) {
      throw DomainError("mode count must be positive, got " + std::to_string(n));
    }
    if (n > kMaxModes) {
      throw CapacityError("mode count " + std::to_string(n) + " exceeds cap " +
                          std::to_string(kMaxModes));
    }
  }

  int value() const { return n_; }
  Eigen::Index dimension() const { return Eigen::Index{1} << n_; }

  friend bool operator==(ModeCount, ModeCount) = default;

private:
  int n_;
};

/// A finite subset of modes encoded as a bitmask; bit k set iff k is in the set.
struct SubsetIndex {
  std::uint32_t bits = 0;

  constexpr SubsetIndex() = default;
  constexpr explicit SubsetIndex(std::uint32_t b) : bits(b) {}

  static SubsetIndex from_modes(std::span<const int> modes) {
    SubsetIndex s;
    for (int k : modes) {
      if (k < 0 || k >= kMaxModes) {
        throw ModeOutOfRange("mode " + std::to_string(k) + " cannot be encoded");
      }
      s.bits |= std::uint32_t{1} << k;
    }
    return s;
  }
  static SubsetIndex from_modes(std::initializer_list<int> modes) {
    return from_modes(std::span<const int>(modes.begin(), modes.size()));
  }

  constexpr bool contains(int k) const { return ((bits >> k) & 1u) != 0; }
  constexpr int cardinality() const { return std::popcount(bits); }
  constexpr SubsetIndex with(int k) const { return SubsetIndex(bits | (std::uint32_t{1} << k)); }
  constexpr SubsetIndex without(int k) const { return SubsetIndex(bits & ~(std::uint32_t{1} << k)); }
  constexpr Eigen::Index index() const { return static_cast<Eigen::Index>(bits); }

  /// Sorted list of contained modes.
  std::vector<int> modes() const {
    std::vector<int> out;
    for (std::uint32_t b = bits; b != 0; b &= b - 1) {
      out.push_back(std::countr_zero(b));
    }
    return out;
  }

  bool valid_for(ModeCount n) const { return (bits >> n.value()) == 0; }

  friend constexpr auto operator<=>(SubsetIndex, SubsetIndex) = default;
};

inline void check_mode(ModeCount n, int k) {
  if (k < 0 || k >= n.value()) {
    throw ModeOutOfRange("mode " + std::to_string(k) + " outside 0.." +
                         std::to_string(n.value() - 1));
  }
}

inline void check_subset(ModeCount n, SubsetIndex s) {
  if (!s.valid_for(n)) {
    throw ModeOutOfRange("subset bitmask " + std::to_string(s.bits) + " invalid for " +
                         std::to_string(n.value()) + " modes");
  }
}

/// All 2^n subsets in increasing bitmask order, so position equals bitmask value.
inline std::vector<SubsetIndex> enumerate_basis(ModeCount n) {
  std::vector<SubsetIndex> basis;
  basis.reserve(static_cast<std::size_t>(n.dimension()));
  for (Eigen::Index i = 0; i < n.dimension(); ++i) {
    basis.emplace_back(static_cast<std::uint32_t>(i));
  }
  return basis;
}

class KetVector {
public:
  explicit KetVector(ModeCount n) : n_(n), amp_(DenseVector::Zero(n.dimension())) {}

  KetVector(ModeCount n, DenseVector amp) : n_(n), amp_(std::move(amp)) {
    if (amp_.size() != n.dimension()) {
      throw ShapeError("ket length " + std::to_string(amp_.size()) + " does not match 2^" +
                       std::to_string(n.value()));
    }
  }

  static KetVector basis(ModeCount n, SubsetIndex s) {
    check_subset(n, s);
    KetVector v(n);
    v.amp_[s.index()] = 1.0;
    return v;
  }

  ModeCount modes() const { return n_; }
  Complex operator[](SubsetIndex s) const { return amp_[s.index()]; }
  const DenseVector& amplitudes() const { return amp_; }
  double norm() const { return amp_.norm(); }

private:
  ModeCount n_;
  DenseVector amp_;
};

/// Sparse complex operator on the 2^n-dimensional truncated space.
class LinearOperator {
public:
  explicit LinearOperator(ModeCount n) : n_(n), m_(n.dimension(), n.dimension()) {}

  LinearOperator(ModeCount n, SparseMatrix m) : n_(n), m_(std::move(m)) {
    if (m_.rows() != n.dimension() || m_.cols() != n.dimension()) {
      throw ShapeError("operator shape does not match 2^" + std::to_string(n.value()));
    }
    m_.makeCompressed();
  }

  static LinearOperator identity(ModeCount n) {
    SparseMatrix m(n.dimension(), n.dimension());
    m.setIdentity();
    return {n, std::move(m)};
  }

  static LinearOperator zero(ModeCount n) { return LinearOperator(n); }

  /// Diagonal operator with entry (s,s) = values[s].
  template <typename Vec>
  static LinearOperator diagonal(ModeCount n, const Vec& values) {
    if (static_cast<Eigen::Index>(values.size()) != n.dimension()) {
      throw ShapeError("diagonal length does not match 2^" + std::to_string(n.value()));
    }
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n.dimension()));
    for (Eigen::Index i = 0; i < n.dimension(); ++i) {
      t.emplace_back(i, i, Complex(values[i]));
    }
    SparseMatrix m(n.dimension(), n.dimension());
    m.setFromTriplets(t.begin(), t.end());
    return {n, std::move(m)};
  }

  ModeCount modes() const { return n_; }
  Eigen::Index dimension() const { return m_.rows(); }
  const SparseMatrix& matrix() const { return m_; }
  DenseMatrix dense() const { return DenseMatrix(m_); }
  Eigen::Index nonzeros() const { return m_.nonZeros(); }

  Complex entry(SubsetIndex row, SubsetIndex col) const { return m_.coeff(row.index(), col.index()); }

  LinearOperator adjoint() const { return {n_, SparseMatrix(m_.adjoint())}; }

  bool is_diagonal() const {
    for (Eigen::Index c = 0; c < m_.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(m_, c); it; ++it) {
        if (it.row() != it.col() && it.value() != Complex(0.0)) return false;
      }
    }
    return true;
  }

  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    check_same(a, b);
    return {a.n_, SparseMatrix(a.m_ + b.m_)};
  }
  friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
    check_same(a, b);
    return {a.n_, SparseMatrix(a.m_ - b.m_)};
  }
  /// Composition: (a*b) applies b first.
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    check_same(a, b);
    return {a.n_, SparseMatrix(a.m_ * b.m_)};
  }
  friend LinearOperator operator*(Complex s, const LinearOperator& a) {
    return {a.n_, SparseMatrix(s * a.m_)};
  }
  friend LinearOperator operator*(double s, const LinearOperator& a) { return Complex(s) * a; }

  LinearOperator& operator+=(const LinearOperator& b) { return *this = *this + b; }

private:
  static void check_same(const LinearOperator& a, const LinearOperator& b) {
    if (a.n_ != b.n_) {
      throw ShapeError("operator mode counts differ: " + std::to_string(a.n_.value()) + " vs " +
                       std::to_string(b.n_.value()));
    }
  }

  ModeCount n_;
  SparseMatrix m_;
};

inline KetVector apply(const LinearOperator& a, const KetVector& v) {
  if (a.modes() != v.modes()) throw ShapeError("operator and ket mode counts differ");
  return {v.modes(), DenseVector(a.matrix() * v.amplitudes())};
}

inline LinearOperator commutator(const LinearOperator& a, const LinearOperator& b) {
  return a * b - b * a;
}

inline LinearOperator anticommutator(const LinearOperator& a, const LinearOperator& b) {
  return a * b + b * a;
}

/// Largest absolute entry.
inline double residual_norm(const LinearOperator& a) {
  double r = 0.0;
  const SparseMatrix& m = a.matrix();
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) r = std::max(r, std::abs(it.value()));
  }
  return r;
}

inline double residual_norm(const LinearOperator& a, const LinearOperator& b) {
  return residual_norm(a - b);
}

inline double max_abs_entry(const DenseMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Operator 2-norm of a dense matrix: largest |eigenvalue| when Hermitian,
/// largest singular value otherwise.
inline double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  const double scale = max_abs_entry(m);
  if (scale == 0.0) return 0.0;
  if (max_abs_entry(m - m.adjoint()) <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<DenseMatrix> svd(m);
  return svd.singularValues()(0);
}

inline double spectral_norm(const LinearOperator& a) {
  if (a.modes().value() > kMaxSpectralModes) {
    throw CapacityError("spectral norm limited to " + std::to_string(kMaxSpectralModes) + " modes");
  }
  return spectral_norm(a.dense());
}

/// Annihilator: Z_s -> Z_{s\k} when k is in s, zero otherwise. No sign factors.
inline LinearOperator annihilator(ModeCount n, int k) {
  check_mode(n, k);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n.dimension() / 2));
  for (SubsetIndex s : enumerate_basis(n)) {
    if (s.contains(k)) t.emplace_back(s.without(k).index(), s.index(), 1.0);
  }
  SparseMatrix m(n.dimension(), n.dimension());
  m.setFromTriplets(t.begin(), t.end());
  return {n, std::move(m)};
}

/// Creator: Z_s -> Z_{s+k} when k is not in s, zero otherwise.
inline LinearOperator creator(ModeCount n, int k) {
  check_mode(n, k);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n.dimension() / 2));
  for (SubsetIndex s : enumerate_basis(n)) {
    if (!s.contains(k)) t.emplace_back(s.with(k).index(), s.index(), 1.0);
  }
  SparseMatrix m(n.dimension(), n.dimension());
  m.setFromTriplets(t.begin(), t.end());
  return {n, std::move(m)};
}

/// creator * annihilator at mode k: diagonal projector onto subsets containing k.
inline LinearOperator occupancy_projector(ModeCount n, int k) {
  check_mode(n, k);
  Eigen::VectorXd d(n.dimension());
  for (SubsetIndex s : enumerate_basis(n)) d[s.index()] = s.contains(k) ? 1.0 : 0.0;
  return LinearOperator::diagonal(n, d);
}

} // namespace qbn
