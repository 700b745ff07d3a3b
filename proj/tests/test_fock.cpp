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

#include <gtest/gtest.h>

#include "qbn/bernoulli.hpp"
#include "qbn/fock.hpp"
#include "test_support.hpp"

namespace qbn {
namespace {

using testing::decode;
using testing::encode;
using testing::ModeSet;

SubsetIndex subset(std::initializer_list<int> modes) {
  return SubsetIndex(encode(ModeSet(modes)));
}

TEST(ModeCountTest, RejectsOutOfRange) {
  EXPECT_THROW(ModeCount(0), DomainError);
  EXPECT_THROW(ModeCount(-3), DomainError);
  EXPECT_THROW(ModeCount(21), CapacityError);
  EXPECT_EQ(ModeCount(20).dimension(), 1 << 20);
}

TEST(EnumerateBasisTest, SmallCases) {
  const auto one = enumerate_basis(ModeCount(1));
  ASSERT_EQ(one.size(), 2u);
  EXPECT_TRUE(one[0].modes().empty());
  EXPECT_EQ(one[1].modes(), std::vector<int>{0});

  const auto two = enumerate_basis(ModeCount(2));
  ASSERT_EQ(two.size(), 4u);
  EXPECT_EQ(two[1].modes(), std::vector<int>{0});
  EXPECT_EQ(two[2].modes(), std::vector<int>{1});
  EXPECT_EQ(two[3].modes(), (std::vector<int>{0, 1}));

  const auto three = enumerate_basis(ModeCount(3));
  ASSERT_EQ(three.size(), 8u);
  EXPECT_EQ(three[5].modes(), (std::vector<int>{0, 2}));
}

TEST(EnumerateBasisTest, PositionIsBitmaskAndDecodeRoundTrips) {
  for (int n = 1; n <= 10; ++n) {
    const auto basis = enumerate_basis(ModeCount(n));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_EQ(basis[i].index(), static_cast<Eigen::Index>(i));
      const ModeSet expected = decode(static_cast<std::uint32_t>(i));
      const auto modes = basis[i].modes();
      EXPECT_EQ(ModeSet(modes.begin(), modes.end()), expected);
      EXPECT_EQ(SubsetIndex::from_modes(modes), basis[i]);
      EXPECT_EQ(basis[i].cardinality(), static_cast<int>(expected.size()));
    }
  }
}

TEST(AnnihilatorTest, ActsByRemovingTheMode) {
  const ModeCount n(4);
  const LinearOperator a1 = annihilator(n, 1);
  EXPECT_EQ(a1.entry(subset({3}), subset({1, 3})), Complex(1.0));
  const KetVector col = apply(a1, KetVector::basis(n, subset({1, 3})));
  EXPECT_NEAR((col.amplitudes() - KetVector::basis(n, subset({3})).amplitudes()).norm(), 0.0, 0.0);

  const LinearOperator a2 = annihilator(n, 2);
  EXPECT_EQ(apply(a2, KetVector::basis(n, subset({1, 3}))).norm(), 0.0);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(apply(annihilator(n, k), KetVector::basis(n, SubsetIndex{})).norm(), 0.0);
  EXPECT_EQ(a1.nonzeros(), 8);
}

TEST(CreatorTest, ActsByAddingTheMode) {
  const ModeCount n(4);
  EXPECT_EQ(creator(n, 2).entry(subset({1, 2}), subset({1})), Complex(1.0));
  EXPECT_EQ(apply(creator(n, 1), KetVector::basis(n, subset({1}))).norm(), 0.0);
  EXPECT_EQ(residual_norm(creator(n, 3).adjoint(), annihilator(n, 3)), 0.0);
}

TEST(AnnihilatorTest, ModeOutOfRange) {
  EXPECT_THROW(annihilator(ModeCount(3), 3), ModeOutOfRange);
  EXPECT_THROW(creator(ModeCount(3), -1), ModeOutOfRange);
  EXPECT_THROW(occupancy_projector(ModeCount(2), 2), ModeOutOfRange);
}

// Compare every matrix entry with the definition applied to set-valued subsets.
TEST(AnnihilatorTest, MatchesSetDefinitionEverywhere) {
  for (int n = 1; n <= 6; ++n) {
    const ModeCount m(n);
    for (int k = 0; k < n; ++k) {
      const DenseMatrix a = annihilator(m, k).dense();
      const DenseMatrix c = creator(m, k).dense();
      for (Eigen::Index col = 0; col < m.dimension(); ++col) {
        const testing::SetKet in{{decode(static_cast<std::uint32_t>(col)), 1.0}};
        DenseVector ea = DenseVector::Zero(m.dimension()), ec = DenseVector::Zero(m.dimension());
        for (const auto& [s, v] : testing::annihilate(k, in)) ea[encode(s)] += v;
        for (const auto& [s, v] : testing::create(k, in)) ec[encode(s)] += v;
        EXPECT_EQ((a.col(col) - ea).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ((c.col(col) - ec).cwiseAbs().maxCoeff(), 0.0);
      }
    }
  }
}

TEST(AnnihilatorTest, AdjointPairNilpotentAndUnitColumns) {
  for (int n = 1; n <= 8; ++n) {
    const ModeCount m(n);
    for (int k = 0; k < n; ++k) {
      const LinearOperator a = annihilator(m, k);
      const LinearOperator c = creator(m, k);
      EXPECT_EQ(residual_norm(a.adjoint(), c), 0.0);
      EXPECT_EQ(residual_norm(a.adjoint().adjoint(), a), 0.0);
      EXPECT_EQ(residual_norm(a * a), 0.0);
      EXPECT_EQ(residual_norm(c * c), 0.0);
      for (const LinearOperator* op : {&a, &c}) {
        const SparseMatrix& mat = op->matrix();
        for (Eigen::Index col = 0; col < mat.outerSize(); ++col) {
          int count = 0;
          for (SparseMatrix::InnerIterator it(mat, col); it; ++it) {
            ++count;
            EXPECT_EQ(it.value(), Complex(1.0));
          }
          EXPECT_LE(count, 1);
        }
      }
    }
  }
}

TEST(OccupancyProjectorTest, DiagonalIdempotentSelfAdjoint) {
  const LinearOperator p = occupancy_projector(ModeCount(2), 0);
  const Eigen::VectorXcd diag = p.dense().diagonal();
  EXPECT_EQ(diag, Eigen::VectorXcd((Eigen::VectorXcd(4) << 0, 1, 0, 1).finished()));
  for (int n = 1; n <= 8; ++n) {
    const ModeCount m(n);
    for (int k = 0; k < n; ++k) {
      const LinearOperator pk = occupancy_projector(m, k);
      EXPECT_TRUE(pk.is_diagonal());
      EXPECT_EQ(residual_norm(pk * pk, pk), 0.0);
      EXPECT_EQ(residual_norm(pk.adjoint(), pk), 0.0);
      EXPECT_EQ(residual_norm(creator(m, k) * annihilator(m, k), pk), 0.0);
      EXPECT_EQ(apply(pk, KetVector::basis(m, SubsetIndex{})).norm(), 0.0);
    }
  }
}

TEST(OperatorAlgebraTest, BasicSemantics) {
  const ModeCount n(3);
  const LinearOperator id = LinearOperator::identity(n);
  const LinearOperator a = annihilator(n, 1);
  const LinearOperator c = creator(n, 1);
  EXPECT_EQ(residual_norm(a * c + c * a, id), 0.0);
  EXPECT_EQ(residual_norm(0.0 * id), 0.0);
  EXPECT_EQ(residual_norm(a - a), 0.0);
  EXPECT_EQ(residual_norm(Complex(0, 2) * a), 2.0);
  EXPECT_EQ(residual_norm((Complex(0, 2) * a).adjoint(), Complex(0, -2) * c), 0.0);
  EXPECT_THROW(a * annihilator(ModeCount(2), 1), ShapeError);
  EXPECT_THROW(apply(a, KetVector(ModeCount(2))), ShapeError);
  EXPECT_THROW(KetVector(n, DenseVector::Zero(5)), ShapeError);

  std::mt19937_64 rng(7);
  const DenseVector v = testing::random_ket(n.dimension(), rng);
  EXPECT_EQ((apply(id, KetVector(n, v)).amplitudes() - v).norm(), 0.0);
}

TEST(OperatorAlgebraTest, ApplyAnnihilatorOnTwoModes) {
  const ModeCount n(2);
  const KetVector out = apply(annihilator(n, 0), KetVector::basis(n, subset({0})));
  EXPECT_EQ(out[SubsetIndex{}], Complex(1.0));
  EXPECT_EQ(out.norm(), 1.0);
  EXPECT_EQ(apply(annihilator(n, 0), KetVector::basis(n, subset({1}))).norm(), 0.0);
}

TEST(OperatorAlgebraTest, SpectralNorm) {
  EXPECT_NEAR(spectral_norm(annihilator(ModeCount(4), 2)), 1.0, 1e-14);
  EXPECT_NEAR(spectral_norm(LinearOperator::identity(ModeCount(3))), 1.0, 1e-14);
  EXPECT_EQ(spectral_norm(LinearOperator::zero(ModeCount(3))), 0.0);
  // [[0,2],[0,0]] padded: singular value 2
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(0, 1) = 2.0;
  EXPECT_NEAR(spectral_norm(m), 2.0, 1e-14);
  EXPECT_THROW(spectral_norm(LinearOperator::identity(ModeCount(13))), CapacityError);
}

TEST(BernoulliGramTest, VacuumEntryIsExactlyOne) {
  const BernoulliProcessSpec spec(ModeCount(3), {0.2, 0.5, 0.9});
  for (std::int64_t samples : {1, 7, 1000}) {
    EXPECT_EQ(sample_bernoulli_gram(spec, samples, 3)(0, 0), 1.0);
  }
}

TEST(BernoulliGramTest, ConvergesToIdentity) {
  const std::int64_t samples = 100000;
  const Eigen::MatrixXd fair = sample_bernoulli_gram(BernoulliProcessSpec(ModeCount(2), {0.5, 0.5}), samples, 11);
  EXPECT_LT(std::abs(fair(1, 2)), 0.05);

  const Eigen::MatrixXd skew = sample_bernoulli_gram(BernoulliProcessSpec(ModeCount(2), {0.3, 0.7}), samples, 12);
  for (Eigen::Index s = 0; s < 4; ++s) EXPECT_LT(std::abs(skew(s, s) - 1.0), 0.1);
  EXPECT_TRUE(skew.isApprox(skew.transpose()));
}

TEST(BernoulliGramTest, DeterministicAndValidated) {
  const BernoulliProcessSpec spec(ModeCount(2), {0.4, 0.6});
  EXPECT_EQ(sample_bernoulli_gram(spec, 500, 5), sample_bernoulli_gram(spec, 500, 5));
  EXPECT_NE(sample_bernoulli_gram(spec, 500, 5), sample_bernoulli_gram(spec, 500, 6));
  EXPECT_THROW(BernoulliProcessSpec(ModeCount(2), {0.0, 0.5}), DomainError);
  EXPECT_THROW(BernoulliProcessSpec(ModeCount(2), {0.5, 1.0}), DomainError);
  EXPECT_THROW(BernoulliProcessSpec(ModeCount(2), {0.5}), ShapeError);
  EXPECT_THROW(sample_bernoulli_gram(spec, 0, 1), DomainError);
  EXPECT_NEAR(spec.theta(0), std::sqrt(0.6 / 0.4), 1e-15);
}

} // namespace
} // namespace qbn
