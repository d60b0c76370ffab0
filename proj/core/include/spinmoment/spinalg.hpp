#pragma once

// Spin-j operators, their Lie-algebra identities, and the moment matrices
// built from them.

#include <array>
#include <compare>

#include <Eigen/Dense>

#include "spinmoment/matcore.hpp"

namespace spinmoment {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix3c = Eigen::Matrix3cd;

/// Total spin j, carried as the integer 2j so half-integers are exact.
class SpinNumber {
 public:
  explicit SpinNumber(int two_j);

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  int dim() const { return two_j_ + 1; }
  /// j(j+1)
  double casimir() const { return j() * (j() + 1.0); }

  auto operator<=>(const SpinNumber&) const = default;

 private:
  int two_j_;
};

/// L1, L2, L3 for spin j. L3 = diag(j, j-1, ..., -j); L1 and L2 follow
/// from the ladder operators with real non-negative matrix elements
/// <m±1|L±|m> = sqrt(j(j+1) - m(m±1)).
struct SpinOperatorTriple {
  SpinNumber spin;
  std::array<HermitianMatrix, 3> L;
};

SpinOperatorTriple spin_operators(SpinNumber j);

/// The triple L'_k = sum_m R_km L_m for a rotation R in SO(3).
SpinOperatorTriple rotate_triple(const SpinOperatorTriple& t, const Matrix3& rotation);

struct AlgebraReport {
  double commutator_residual = 0.0;  // max_klm |[L_k, L_l] - i eps_klm L_m|
  double casimir_residual = 0.0;     // max |sum_k L_k^2 - j(j+1) I|
};

AlgebraReport validate_algebra(const SpinOperatorTriple& t);

/// Levi-Civita symbol on 0-based indices.
int levi_civita(int k, int l, int m);

/// l_m from the antisymmetric imaginary part, Im(M_kl) = eps_klm l_m / 2.
/// Throws ConstraintViolation("first-moment-consistency") when the three
/// off-diagonal pairs are not antisymmetric within `tol`.
Vector3 extract_first_moments(const Matrix3c& m, double tol = 1e-9);

inline constexpr double kMomentTolerance = 1e-9;

/// Structural checks every moment matrix of a quantum state satisfies:
/// Hermiticity, real diagonal, Casimir trace tr Re(M) = j(j+1),
/// antisymmetric imaginary part and, for j = 1/2, the forced second
/// moments L_k L_l = delta_kl / 4 + i eps_klm L_m / 2. Throws
/// ConstraintViolation naming the first violated constraint.
void validate_moments(SpinNumber j, const Matrix3c& m, double tol = kMomentTolerance);

/// Second moments M_kl = tr(L_k L_l rho) together with the spin number.
class MomentMatrix {
 public:
  /// Validates via validate_moments(). The stored matrix is symmetrized
  /// exactly (Hermitian, real diagonal).
  static MomentMatrix create(SpinNumber j, const Matrix3c& m, double tol = kMomentTolerance);

  SpinNumber spin() const { return spin_; }
  const Matrix3c& matrix() const { return m_; }
  const Vector3& first_moments() const { return first_; }
  Complex operator()(int k, int l) const { return m_(k, l); }

 private:
  MomentMatrix(SpinNumber j, const Matrix3c& m, const Vector3& l) : spin_(j), m_(m), first_(l) {}

  SpinNumber spin_;
  Matrix3c m_;
  Vector3 first_;
};

/// M_kl = tr(L_k L_l rho). rho must be a density operator of dimension
/// 2j+1 (ConstraintViolation("state") otherwise).
MomentMatrix moment_matrix(const HermitianMatrix& rho, const SpinOperatorTriple& t);

/// Same as above for an arbitrary Hermitian operator; no state check and
/// no Casimir validation. Used to probe the linear structure.
Matrix3c raw_moments(const HermitianMatrix& a, const SpinOperatorTriple& t);

/// 4x4 expectation value matrix over F = {1, L1, L2, L3} (index 0 is the
/// identity): chi_kl = tr(F_k^† F_l rho).
struct ExpectationValueMatrix4 {
  HermitianMatrix chi;
};

ExpectationValueMatrix4 chi_matrix(const MomentMatrix& m);

/// The antisymmetric real matrix A(l) with A_kl = eps_klm l_m / 2, so that
/// a standard-form moment matrix reads D + i A(l).
Matrix3 antisymmetric_part(const Vector3& l);

struct StandardForm {
  Matrix3 rotation;  // R in SO(3), R Re(M) R^T = diag(D)
  Vector3 diagonal;  // D, sorted descending
  Vector3 first_moments;  // R l

  /// D + i A(R l); equals R M R^T.
  Matrix3c reassemble() const;
};

/// Diagonalize Re(M) by a proper rotation. Within degenerate eigenspaces
/// the rotation closest to the identity is chosen; if the result has
/// det -1 the column with the smallest diagonal entry is flipped.
StandardForm standard_form(const MomentMatrix& m);

}  // namespace spinmoment
