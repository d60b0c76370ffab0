#include <gtest/gtest.h>

#include <random>

#include <spinmoment/errors.hpp>
#include <spinmoment/matcore.hpp>

#include "oracles.hpp"

using namespace spinmoment;

namespace {

ComplexMatrix random_complex(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  ComplexMatrix a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) a(i, k) = Complex(g(rng), g(rng));
  return a;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix a = random_complex(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(HermitianMatrix, RejectsNonHermitianInputByName) {
  ComplexMatrix m(2, 2);
  m << 1, 2, 0, 1;
  try {
    HermitianMatrix h(m);
    FAIL() << "accepted a non-Hermitian matrix";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.constraint(), "hermiticity");
  }
}

TEST(HermitianMatrix, SymmetrizesRoundingNoise) {
  ComplexMatrix m(2, 2);
  m << Complex(1, 1e-14), Complex(2, 1), Complex(2, -1 + 1e-14), 3;
  HermitianMatrix h(m);
  EXPECT_EQ(h(0, 0).imag(), 0.0);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
  EXPECT_NEAR(h.trace(), 4.0, 1e-15);
}

TEST(HermitianEig, DiagonalAndPauliSpectra) {
  RealVector d(2);
  d << 0.5, -0.5;
  auto e = hermitian_eig(HermitianMatrix::diagonal(d));
  EXPECT_NEAR(e.values(0), -0.5, 1e-15);
  EXPECT_NEAR(e.values(1), 0.5, 1e-15);

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  e = hermitian_eig(HermitianMatrix(x));
  EXPECT_NEAR(e.values(0), -1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
}

TEST(HermitianEig, ReconstructsRandomMatricesUpToDim64) {
  std::mt19937_64 rng(11);
  for (Eigen::Index n : {1, 2, 3, 5, 8, 17, 33, 64}) {
    const ComplexMatrix h = random_hermitian(rng, n);
    const auto e = hermitian_eig(HermitianMatrix(h));
    const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    const double radius = e.values.cwiseAbs().maxCoeff();
    EXPECT_LE((back - h).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + radius)) << "n = " << n;
    EXPECT_LE((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
    // Independent route: realified 2n x 2n symmetric eigenproblem.
    const RealVector ref = oracle::eigenvalues_via_realification(h);
    EXPECT_LE((ref - e.values).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + radius)) << "n = " << n;
  }
}

TEST(HermitianEig, RawOverloadValidatesHermiticity) {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(hermitian_eig(m), ConstraintViolation);
}

TEST(Psd, ToleranceSemantics) {
  EXPECT_DOUBLE_EQ(min_eigenvalue(HermitianMatrix::identity(3)), 1.0);
  EXPECT_TRUE(is_psd(HermitianMatrix::identity(3)));
  RealVector d(2);
  d << 1.0, -1e-6;
  EXPECT_FALSE(is_psd(HermitianMatrix::diagonal(d), 1e-8));
  d << 1.0, -1e-9;
  EXPECT_TRUE(is_psd(HermitianMatrix::diagonal(d), 1e-8));
}

TEST(Kron, MatchesDefinition) {
  EXPECT_TRUE(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)).isApprox(ComplexMatrix::Identity(4, 4)));
  const ComplexMatrix zi = kron(pauli(3), ComplexMatrix::Identity(2, 2));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  EXPECT_EQ(zi, expected);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_complex(rng, 2, 2), b = random_complex(rng, 2, 2);
    const ComplexMatrix c = random_complex(rng, 2, 2), d = random_complex(rng, 2, 2);
    EXPECT_LE((kron(a, b) * kron(c, d) - kron(a * c, b * d)).cwiseAbs().maxCoeff(), 1e-12);
    const ComplexMatrix e = random_complex(rng, 3, 2);
    EXPECT_LE((kron(a, e) - oracle::kron(a, e)).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(PartialTranspose, BellStateSpectrum) {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix pt = partial_transpose_b(bell * bell.adjoint());
  const auto e = hermitian_eig(HermitianMatrix(pt));
  EXPECT_NEAR(e.values(0), -0.5, 1e-14);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(e.values(i), 0.5, 1e-14);
}

TEST(PartialTranspose, ProductsInvolutionAndTrace) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = random_complex(rng, 2, 2), b = random_complex(rng, 2, 2);
    EXPECT_LE((partial_transpose_b(kron(a, b)) - kron(a, b.transpose())).cwiseAbs().maxCoeff(), 1e-14);
    const ComplexMatrix x = random_complex(rng, 4, 4);
    EXPECT_LE((partial_transpose_b(partial_transpose_b(x)) - x).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE(std::abs(partial_transpose_b(x).trace() - x.trace()), 1e-13);
    EXPECT_LE((partial_transpose_b(x) - oracle::partial_transpose(x)).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(PartialTrace, ProductAndMaximallyEntangled) {
  std::mt19937_64 rng(9);
  const ComplexMatrix rho = oracle::ginibre_state(rng, 3, 3);
  const ComplexMatrix sigma = oracle::ginibre_state(rng, 2, 2) * 2.5;
  EXPECT_LE((partial_trace(kron(rho, sigma), 3, 2, Subsystem::A) - rho * sigma.trace()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((partial_trace(kron(rho, sigma), 3, 2, Subsystem::B) - sigma * rho.trace()).cwiseAbs().maxCoeff(), 1e-14);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_LE((partial_trace(bell * bell.adjoint(), 2, 2, Subsystem::A) - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, OrderIndependentOnThreeQubits) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho = oracle::ginibre_state(rng, 8, 4);
    // Trace the last qubit, then the middle one, versus both at once.
    const ComplexMatrix step = partial_trace(partial_trace(rho, 4, 2, Subsystem::A), 2, 2, Subsystem::A);
    const ComplexMatrix once = partial_trace(rho, 2, 4, Subsystem::A);
    EXPECT_LE((step - once).cwiseAbs().maxCoeff(), 1e-15);
    // Trace the first qubit then the next, versus the grouped pair.
    const ComplexMatrix front = partial_trace(partial_trace(rho, 2, 4, Subsystem::B), 2, 2, Subsystem::B);
    EXPECT_LE((front - partial_trace(rho, 4, 2, Subsystem::B)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(SymmetricIsometry, SmallCases) {
  EXPECT_TRUE(symmetric_isometry(1).matrix.isApprox(ComplexMatrix::Identity(2, 2)));
  const ComplexMatrix v = symmetric_isometry(2).matrix;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = expected(2, 1) = 1.0 / std::sqrt(2.0);
  expected(3, 2) = 1.0;
  EXPECT_LE((v - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SymmetricIsometry, OrthonormalAndPermutationInvariant) {
  for (int n = 1; n <= 10; ++n) {
    const ComplexMatrix v = symmetric_isometry(n).matrix;
    ASSERT_EQ(v.rows(), 1L << n);
    ASSERT_EQ(v.cols(), n + 1);
    EXPECT_LE((v.adjoint() * v - ComplexMatrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((v - oracle::symmetric_basis(n)).cwiseAbs().maxCoeff(), 1e-14);
    // Swap qubit slots p and q on every basis string.
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        ComplexMatrix swapped(v.rows(), v.cols());
        for (long s = 0; s < (1L << n); ++s) {
          const long bp = (s >> p) & 1, bq = (s >> q) & 1;
          long t = s & ~((1L << p) | (1L << q));
          t |= (bq << p) | (bp << q);
          swapped.row(t) = v.row(s);
        }
        EXPECT_LE((swapped - v).cwiseAbs().maxCoeff(), 0.0);
      }
    }
  }
}

TEST(SymmetricIsometry, RespectsQubitCap) {
  EXPECT_THROW(symmetric_isometry(13), CapacityExceeded);
  EXPECT_THROW(symmetric_isometry(5, 4), CapacityExceeded);
  EXPECT_THROW(symmetric_isometry(0), std::invalid_argument);
}

TEST(HermitianBasis, OrthonormalAndComplete) {
  for (Eigen::Index n : {1, 2, 3, 4}) {
    const auto basis = hermitian_basis(n);
    ASSERT_EQ(static_cast<Eigen::Index>(basis.size()), n * n);
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b)
        EXPECT_NEAR(hs_inner(basis[a], basis[b]), a == b ? 1.0 : 0.0, 1e-15);
    // Expansion of a random Hermitian matrix is exact.
    std::mt19937_64 rng(static_cast<unsigned>(n));
    const ComplexMatrix h = random_hermitian(rng, n);
    ComplexMatrix back = ComplexMatrix::Zero(n, n);
    for (const auto& e : basis) back += hs_inner(e.matrix(), h) * e.matrix();
    EXPECT_LE((back - h).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Pauli, AlgebraAndBinomial) {
  for (int k = 1; k <= 3; ++k) {
    EXPECT_LE((pauli(k) * pauli(k) - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0);
  }
  EXPECT_LE((pauli(1) * pauli(2) - Complex(0, 1) * pauli(3)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(pauli(3), oracle::pauli_z());
  EXPECT_DOUBLE_EQ(binomial(10, 3), 120.0);
  EXPECT_DOUBLE_EQ(binomial(12, 6), 924.0);
  EXPECT_DOUBLE_EQ(binomial(5, 0), 1.0);
}

TEST(ClipToState, RemovesDustOnly) {
  RealVector d(3);
  d << 0.6, 0.4 + 5e-10, -5e-10;
  const HermitianMatrix clipped = clip_to_state(HermitianMatrix::diagonal(d));
  EXPECT_GE(min_eigenvalue(clipped), 0.0);
  EXPECT_NEAR(clipped.trace(), 1.0, 1e-15);
  d << 0.7, 0.4, -0.1;
  EXPECT_LT(min_eigenvalue(clip_to_state(HermitianMatrix::diagonal(d))), -0.05);
}
