#include <gtest/gtest.h>

#include <random>

#include <spinmoment/sdp.hpp>

#include "oracles.hpp"

using namespace spinmoment;

namespace {

HermitianMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
  return HermitianMatrix::symmetrized(a + a.adjoint());
}

SdpProblem trace_problem(const HermitianMatrix& c) {
  SdpProblem p;
  p.dim = c.dim();
  p.objective = c;
  p.constraints.push_back({HermitianMatrix::identity(c.dim()), 1.0});
  return p;
}

}  // namespace

TEST(Sdp, StatusNames) {
  EXPECT_STREQ(to_string(SdpStatus::optimal), "optimal");
  EXPECT_STREQ(to_string(SdpStatus::primal_infeasible), "primal-infeasible-certificate");
}

TEST(Sdp, MinEigenvalueProgram) {
  std::mt19937_64 rng(51);
  for (int n : {2, 3, 5, 8, 16}) {
    for (int trial = 0; trial < 10; ++trial) {
      const HermitianMatrix c = random_hermitian(rng, n);
      const auto sol = solve(trace_problem(c));
      ASSERT_EQ(sol.status, SdpStatus::optimal) << sol.message;
      const double expected = oracle::eigenvalues_via_realification(c.matrix())(0);
      EXPECT_NEAR(sol.primal_objective, expected, 1e-7 * (1 + std::abs(expected)));
      EXPECT_NEAR(sol.dual_objective, expected, 1e-7 * (1 + std::abs(expected)));
      EXPECT_LE(sol.primal_residual, 1e-8);
      EXPECT_GE(min_eigenvalue(sol.x), -1e-10);
      EXPECT_GE(min_eigenvalue(sol.z), -1e-10);
      EXPECT_NEAR(sol.y(0), expected, 1e-7 * (1 + std::abs(expected)));
    }
  }
}

TEST(Sdp, DiagonalExample) {
  // min x11 + 2 x22 s.t. tr X = 1 -> 1 at X = E_11.
  RealVector d(2);
  d << 1.0, 2.0;
  const auto sol = solve(trace_problem(HermitianMatrix::diagonal(d)));
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  EXPECT_NEAR(sol.primal_objective, 1.0, 1e-8);
  EXPECT_NEAR(sol.x(0, 0).real(), 1.0, 1e-7);
  EXPECT_LE(sol.gap, 1e-8);
}

TEST(Sdp, DependentConstraintsDropped) {
  SdpProblem p = trace_problem(HermitianMatrix::identity(3));
  p.constraints.push_back({HermitianMatrix::identity(3) * 2.0, 2.0});
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  EXPECT_NEAR(sol.primal_objective, 1.0, 1e-8);
  ASSERT_EQ(sol.y.size(), 2);
  EXPECT_NEAR(sol.y(0) + 2.0 * sol.y(1), 1.0, 1e-8);
}

TEST(Sdp, InconsistentConstraintsGiveCertificate) {
  SdpProblem p = trace_problem(HermitianMatrix::identity(2));
  p.constraints.push_back({HermitianMatrix::identity(2), 2.0});
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, SdpStatus::primal_infeasible);
  EXPECT_NEAR(sol.y(0) * 1.0 + sol.y(1) * 2.0, 1.0, 1e-9);
  EXPECT_NEAR(sol.y(0) + sol.y(1), 0.0, 1e-9);
}

TEST(Sdp, InfeasibleByPositivity) {
  // X >= 0, tr X = 1, X_11 = 2 is impossible.
  SdpProblem p = trace_problem(HermitianMatrix::identity(2));
  RealVector e(2);
  e << 1.0, 0.0;
  p.constraints.push_back({HermitianMatrix::diagonal(e), 2.0});
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, SdpStatus::primal_infeasible) << sol.message;
  // Farkas: b^T y = 1 and sum y_i A_i <= 0.
  const RealVector b = (RealVector(2) << 1.0, 2.0).finished();
  EXPECT_NEAR(b.dot(sol.y), 1.0, 1e-6);
  const HermitianMatrix ay = HermitianMatrix::identity(2) * sol.y(0) + HermitianMatrix::diagonal(e) * sol.y(1);
  EXPECT_LE(oracle::eigenvalues_via_realification(ay.matrix())(1), 1e-6);
}

TEST(Sdp, UnboundedDetected) {
  // min -x11 + x22 with only x12 fixed: X_11 can grow without bound.
  SdpProblem p;
  p.dim = 2;
  RealVector c(2);
  c << -1.0, 1.0;
  p.objective = HermitianMatrix::diagonal(c);
  ComplexMatrix off = ComplexMatrix::Zero(2, 2);
  off(0, 1) = off(1, 0) = 1.0;
  p.constraints.push_back({HermitianMatrix(off), 0.0});
  const auto sol = solve(p);
  EXPECT_EQ(sol.status, SdpStatus::dual_infeasible) << sol.message;
}

TEST(Sdp, CapsAndMismatches) {
  SdpSettings s;
  s.max_dim = 4;
  EXPECT_THROW(solve(trace_problem(HermitianMatrix::identity(5)), s), CapacityExceeded);
  SdpProblem p = trace_problem(HermitianMatrix::identity(3));
  p.constraints.push_back({HermitianMatrix::identity(2), 1.0});
  EXPECT_THROW(solve(p), std::invalid_argument);
}

TEST(Sdp, HistoryRecordedAndMonotoneGap) {
  std::mt19937_64 rng(53);
  SdpSettings s;
  s.record_history = true;
  const auto sol = solve(trace_problem(random_hermitian(rng, 6)), s);
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  ASSERT_FALSE(sol.history.empty());
  // One entry per iteration plus the terminal iterate.
  EXPECT_EQ(static_cast<int>(sol.history.size()), sol.iterations + 1);
  EXPECT_LT(sol.history.back().mu, sol.history.front().mu);
}

TEST(Sdp, AgreesWithEllipsoidDual) {
  std::mt19937_64 rng(57);
  std::uniform_int_distribution<int> dims(2, 4);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = dims(rng);
    // C > 0 so the dual is feasible, and b from an interior X0.
    const ComplexMatrix g = random_hermitian(rng, n).matrix();
    const HermitianMatrix c = HermitianMatrix::symmetrized(g * g + ComplexMatrix::Identity(n, n));
    const ComplexMatrix x0 = oracle::ginibre_state(rng, n, n);
    SdpProblem p = trace_problem(c);
    std::vector<ComplexMatrix> a{ComplexMatrix::Identity(n, n)};
    RealVector b(3);
    b(0) = 1.0;
    for (int k = 1; k < 3; ++k) {
      const HermitianMatrix ak = random_hermitian(rng, n);
      b(k) = hs_inner(ak.matrix(), x0);
      p.constraints.push_back({ak, b(k)});
      a.push_back(ak.matrix());
    }
    const auto sol = solve(p);
    ASSERT_EQ(sol.status, SdpStatus::optimal) << sol.message;
    const auto ref = oracle::ellipsoid_dual(c.matrix(), a, b, 1e3, 30000);
    ASSERT_TRUE(ref.feasible_found);
    EXPECT_NEAR(sol.primal_objective, ref.value, 1e-4 * (1 + std::abs(ref.value))) << "trial " << trial;
    // Weak duality: every dual feasible point bounds the primal from below.
    EXPECT_GE(sol.primal_objective, ref.value - 1e-8);
  }
}

TEST(Orthonormalize, IdentityFirstAndTraceless) {
  std::mt19937_64 rng(61);
  std::vector<HermitianMatrix> ops{HermitianMatrix::identity(3)};
  std::vector<double> vals{1.0};
  for (int k = 0; k < 4; ++k) {
    ops.push_back(random_hermitian(rng, 3));
    vals.push_back(0.1 * k);
  }
  const auto basis = orthonormalize(ops, vals);
  ASSERT_EQ(basis.ops.size(), 5u);
  EXPECT_NEAR(basis.values(0), 1.0 / std::sqrt(3.0), 1e-14);
  for (std::size_t k = 0; k < basis.ops.size(); ++k) {
    if (k > 0) EXPECT_NEAR(basis.ops[k].trace(), 0.0, 1e-12);
    for (std::size_t l = 0; l < basis.ops.size(); ++l) {
      EXPECT_NEAR(hs_inner(basis.ops[k], basis.ops[l]), k == l ? 1.0 : 0.0, 1e-12);
    }
    // ops[k] = sum_i transform(k, i) input[i] and values likewise.
    ComplexMatrix rebuilt = ComplexMatrix::Zero(3, 3);
    double v = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      rebuilt += basis.transform(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * ops[i].matrix();
      v += basis.transform(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * vals[i];
    }
    EXPECT_LE((rebuilt - basis.ops[k].matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(v, basis.values(static_cast<Eigen::Index>(k)), 1e-12);
  }
}

TEST(Orthonormalize, DropsAndRejects) {
  const HermitianMatrix z(pauli(3));
  const std::vector<HermitianMatrix> ops{HermitianMatrix::identity(2), z, HermitianMatrix::identity(2) * 3.0};
  const std::vector<double> consistent{1.0, 0.2, 3.0};
  const auto basis = orthonormalize(ops, consistent);
  EXPECT_EQ(basis.ops.size(), 2u);
  ASSERT_EQ(basis.dropped.size(), 1u);
  EXPECT_EQ(basis.dropped[0], 2u);

  const std::vector<double> clash{1.0, 0.2, 2.0};
  try {
    orthonormalize(ops, clash);
    FAIL();
  } catch (const InconsistentConstraints& e) {
    const RealVector& c = e.certificate();
    ASSERT_EQ(c.size(), 3);
    EXPECT_NEAR(c(0) * 1.0 + c(1) * 0.2 + c(2) * 2.0, 1.0, 1e-9);
    ComplexMatrix combo = c(0) * ops[0].matrix() + c(1) * ops[1].matrix() + c(2) * ops[2].matrix();
    EXPECT_LE(combo.cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Phase1, FeasibleInteriorHasNegativeT) {
  const std::vector<LinearConstraint> none;
  const auto r = phase1_min_t(none, 4);
  EXPECT_NEAR(r.t_star, -0.25, 1e-8);
  EXPECT_NEAR(r.x.trace(), 1.0, 1e-10);
  EXPECT_NEAR(r.witness.trace(), 1.0, 1e-9);
}

TEST(Phase1, InfeasibleWitness) {
  RealVector e(3);
  e << 1.0, 0.0, 0.0;
  const std::vector<LinearConstraint> cons{{HermitianMatrix::diagonal(e), 1.5}};
  const auto r = phase1_min_t(cons, 3);
  // Best X: diag(1.5, -0.25, -0.25), so t* = 0.25.
  EXPECT_NEAR(r.t_star, 0.25, 1e-8);
  EXPECT_NEAR(r.witness_value, -r.t_star, 1e-8);
  EXPECT_NEAR(r.witness.trace(), 1.0, 1e-9);
  EXPECT_GE(oracle::eigenvalues_via_realification(r.witness.matrix())(0), -1e-9);
  EXPECT_NEAR(hs_inner(r.witness, r.x), -r.t_star, 1e-8);
  EXPECT_NEAR(hs_inner(r.x, HermitianMatrix::diagonal(e)), 1.5, 1e-9);
}
