#pragma once

// A small dense SDP solver over the Hermitian PSD cone.
//
//   primal:  min <C, X>   s.t. <A_i, X> = b_i,  X >= 0
//   dual:    max b^T y    s.t. Z = C - sum_i y_i A_i >= 0
//
// Primal-dual path following with the HKM search direction and a
// Mehrotra predictor-corrector step. Constraints are Gram-Schmidt
// orthonormalized before the iteration starts, which drops linearly
// dependent rows and keeps the Schur complement well conditioned.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinmoment/errors.hpp"
#include "spinmoment/matcore.hpp"

namespace spinmoment {

struct LinearConstraint {
  HermitianMatrix op;
  double value = 0.0;
};

struct SdpProblem {
  Eigen::Index dim = 0;
  HermitianMatrix objective;
  std::vector<LinearConstraint> constraints;
};

enum class SdpStatus { optimal, primal_infeasible, dual_infeasible, numerical_failure };

const char* to_string(SdpStatus s);

struct SdpSettings {
  int max_iterations = 200;
  double tolerance = 1e-9;       // relative residuals and gap at termination
  double step_fraction = 0.98;   // fraction of the step to the cone boundary
  Eigen::Index max_dim = 64;
  double rank_tolerance = 1e-10;        // Gram-Schmidt dependence threshold
  double consistency_tolerance = 1e-8;  // allowed mismatch on dropped rows
  double certificate_tolerance = 1e-9;  // Farkas certificate acceptance
  bool record_history = false;
};

struct SdpIterate {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // ||b - A(X)||
  double dual_residual = 0.0;    // ||C - Z - A^T y||_F
  double mu = 0.0;               // <X, Z> / n
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  HermitianMatrix x;
  RealVector y;  // in the caller's constraint order
  HermitianMatrix z;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;  // max_i |<A_i, X> - b_i| over all input rows
  double dual_residual = 0.0;    // max |C - Z - sum y_i A_i|
  int iterations = 0;
  std::vector<SdpIterate> history;
  std::string message;
};

/// Optional interior starting point (X > 0, Z > 0); y starts at zero.
struct StartingPoint {
  HermitianMatrix x;
  HermitianMatrix z;
};

/// Solve an SdpProblem. Never throws for infeasible or unbounded input:
/// those come back as certificates (primal_infeasible: y with b^T y = 1
/// and sum y_i A_i <= 0 up to tolerance; dual_infeasible: X >= 0 with
/// A(X) = 0 and <C, X> = -1). Dimension mismatches and the size cap
/// raise std::invalid_argument / CapacityExceeded.
SdpSolution solve(const SdpProblem& problem, const SdpSettings& settings = {},
                  const std::optional<StartingPoint>& start = std::nullopt);

/// Hilbert-Schmidt orthonormal operators spanning the inputs, with the
/// values carried through the same linear map:
///   ops[k] = sum_i transform(k, i) * input[i],  values = transform * b.
/// An identity placed first maps to 1/sqrt(n); every later output is then
/// traceless.
struct OrthonormalBasis {
  std::vector<HermitianMatrix> ops;
  RealVector values;
  RealMatrix transform;              // rank x (number of inputs)
  std::vector<std::size_t> dropped;  // inputs found linearly dependent
};

/// Linear dependence with values that disagree by more than
/// `consistency_tolerance` (relative) raises InconsistentConstraints.
class InconsistentConstraints : public ConstraintViolation {
 public:
  /// `certificate` c satisfies sum_i c_i A_i ~ 0 and c^T b = 1.
  InconsistentConstraints(const std::string& detail, RealVector certificate)
      : ConstraintViolation("constraint-consistency", detail), certificate_(std::move(certificate)) {}
  const RealVector& certificate() const { return certificate_; }

 private:
  RealVector certificate_;
};

OrthonormalBasis orthonormalize(std::span<const HermitianMatrix> ops, std::span<const double> values,
                                double rank_tolerance = 1e-10,
                                double consistency_tolerance = 1e-8);

/// Phase-1 feasibility problem for { X >= 0 : <A_i, X> = b_i }:
///
///   min t  s.t.  X + t 1 >= 0,  <A_i, X> = b_i.
///
/// The trace normalization tr X = 1 is always imposed (it is prepended to
/// the constraint list). With W = X + t 1 this becomes the standard-form
/// program min <1/n, W> over traceless orthonormal constraints, whose dual
/// variable Z = 1/n - sum y_i S_i is the separating hyperplane: tr Z = 1,
/// Z >= 0, and tr(Z X_fix) = -t_star for any X_fix meeting the equalities.
struct Phase1Result {
  SdpSolution solution;        // of the W program
  double t_star = 0.0;
  HermitianMatrix x;           // W - t_star 1; meets the equalities exactly
  OrthonormalBasis basis;      // basis.ops[0] = 1/sqrt(n)
  HermitianMatrix witness;     // Z
  RealVector witness_coefficients;  // z with Z = sum z_k basis.ops[k]
  double witness_value = 0.0;       // z . basis.values = tr(Z X_fix)
};

Phase1Result phase1_min_t(std::span<const LinearConstraint> constraints, Eigen::Index dim,
                          const SdpSettings& settings = {});

}  // namespace spinmoment
