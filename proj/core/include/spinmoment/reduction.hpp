#pragma once

// The spin-1 (two-qubit) reduction of a spin-j system.
//
// Every spin-j state is a state of 2j qubits supported on the symmetric
// subspace, and all first and second spin moments are linear functionals
// of its two-qubit marginal. The fixed operators below realize those
// functionals on the symmetric two-qubit space, written in the basis
//   { |00>, (|01> + |10>)/sqrt(2), |11> }     with |0> = spin-up,
// so index 0 carries L3 = +1 and the highest-weight state |j, j> reduces
// to |00><00|.

#include <array>

#include "spinmoment/matcore.hpp"
#include "spinmoment/spinalg.hpp"

namespace spinmoment {

/// mean values:  tr(L_k omega)     = tr(lam1[k] rho)
/// products:     tr(L_k L_l omega) = tr(lam2[k][l] rho)
/// where rho is the two-qubit marginal of omega.
struct ReductionOperators {
  SpinNumber spin;
  std::array<HermitianMatrix, 3> lam1;
  std::array<std::array<ComplexMatrix, 3>, 3> lam2;
};

/// Requires j >= 1; spin 1/2 has no two-qubit marginal and is handled by
/// the first-moment test instead (std::invalid_argument).
ReductionOperators reduction_operators(SpinNumber j);

/// Same operators, memoized per spin in a process-wide read-only table.
const ReductionOperators& cached_reduction_operators(SpinNumber j);

/// The 4x3 isometry from the symmetric two-qubit basis into C^2 (x) C^2.
const ComplexMatrix& two_qubit_symmetric_basis();

/// V rho V^† (4x4) and V^† X V (3x3).
ComplexMatrix embed_two_qubit(const ComplexMatrix& rho3);
ComplexMatrix restrict_two_qubit(const ComplexMatrix& x4);

/// A trace-one Hermitian operator on the symmetric two-qubit space. Not
/// necessarily positive: a reconstruction from non-quantum moments can come
/// out indefinite, which is itself a verdict.
class SymmetricTwoQubitState {
 public:
  /// Throws ConstraintViolation("trace") if |tr rho - 1| > 1e-10.
  static SymmetricTwoQubitState create(const HermitianMatrix& rho);

  const HermitianMatrix& rho() const { return rho_; }
  bool is_state(double tol = kDefaultPsdTolerance) const { return is_psd(rho_, tol); }

 private:
  explicit SymmetricTwoQubitState(HermitianMatrix rho) : rho_(std::move(rho)) {}
  HermitianMatrix rho_;
};

/// The unique trace-one rho_j with tr(lam2[k][l] rho_j) = M_kl, solved by
/// least squares over the 9 real parameters of a Hermitian 3x3 matrix.
SymmetricTwoQubitState reconstruct_rho(const MomentMatrix& m);

/// Unvalidated input: structural violations are reported by name
/// (ConstraintViolation "casimir", "hermiticity", ...), and a residual
/// above 1e-8 after the solve raises "moment-consistency".
SymmetricTwoQubitState reconstruct_rho(SpinNumber j, const Matrix3c& m);

/// tr(lam2[k][l] rho), i.e. the moment matrix a spin-j system with
/// two-qubit marginal rho would have (no validation).
Matrix3c moments_from_rho(const HermitianMatrix& rho, SpinNumber j);

/// j-stable coordinates
///   u_k = <L_k> / j,   v_k = <L_k^2> / (j (j - 1/2)) - 1 / (2j - 1),
/// with sum_k v_k = 1 by the Casimir identity. In terms of the marginal,
/// u_k = <sigma_k (x) 1> and v_k = <sigma_k (x) sigma_k>.
struct RenormalizedCoords {
  Vector3 u = Vector3::Zero();
  Vector3 v = Vector3::Zero();
  SpinNumber spin{2};
};

RenormalizedCoords renormalized_coords(const MomentMatrix& m);

/// Inverse of renormalized_coords. The real off-diagonal second moments
/// (Re M_23, Re M_13, Re M_12) are zero unless supplied. Throws
/// ConstraintViolation("casimir") when |sum v - 1| > 1e-9.
MomentMatrix moments_from_coords(const RenormalizedCoords& c,
                                 const Vector3& real_offdiagonal = Vector3::Zero());

/// rho_j for the given coordinates; independent of the spin number.
SymmetricTwoQubitState rho_from_coords(const Vector3& u, const Vector3& v);

/// Reduced expectation value matrix of order j over {1, L_k / j}:
///   tau_00 = tr rho, tau_0(k+1) = tr(lam1[k] rho) / j,
///   tau_(k+1)(l+1) = tr(lam2[k][l] rho) / j^2.
struct ReducedEVM {
  HermitianMatrix tau;
};

ReducedEVM tau(const SymmetricTwoQubitState& rho, SpinNumber j);
ReducedEVM tau(const HermitianMatrix& rho, SpinNumber j);

/// Minimum eigenvalue of the partial transpose of V rho V^†.
double ppt_min_eigenvalue(const HermitianMatrix& rho);

/// rho is a state and its embedding has a positive partial transpose.
bool ppt_inner_test(const SymmetricTwoQubitState& rho, double tol = kDefaultPsdTolerance);

}  // namespace spinmoment
