#pragma once

// Decision procedures for "do these first and second spin moments come
// from a quantum state?", from the closed-form first-moment law up to the
// exact semidefinite test, and the pipeline that chains them.

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spinmoment/matcore.hpp"
#include "spinmoment/reduction.hpp"
#include "spinmoment/sdp.hpp"
#include "spinmoment/spinalg.hpp"

namespace spinmoment {

enum class VerdictStatus { quantum, non_quantum, boundary };

const char* to_string(VerdictStatus s);

/// Separating hyperplane for a non-quantum moment vector. Z is positive
/// semidefinite with unit trace and lies in the span of the measured
/// operators, so tr(Z omega) >= 0 for every state omega while the detected
/// input gives value < 0.
struct Witness {
  RealVector z;                    // over the orthonormalized basis
  HermitianMatrix Z;
  double value = 0.0;              // z . t
  RealVector coefficients;         // Z = sum_i coefficients_i O_i over the input operators
  std::vector<std::string> labels; // names of the input operators O_i

  /// coefficients . b for a moment vector b over the same operators.
  double evaluate(const RealVector& b) const;
};

struct TestRecord {
  std::string name;
  std::string outcome;
  double seconds = 0.0;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::boundary;
  std::variant<std::monostate, HermitianMatrix, Witness> certificate;
  std::vector<TestRecord> tests_run;
  std::string stage;  // the stage that decided
  double t_star = std::numeric_limits<double>::quiet_NaN();

  const HermitianMatrix* state() const { return std::get_if<HermitianMatrix>(&certificate); }
  const Witness* witness() const { return std::get_if<Witness>(&certificate); }
};

/// Raised when the SDP stage cannot reach a decision.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kBoundaryBand = 1e-7;

/// ||l|| <= j decides; | |l| - j | <= 1e-9 j is reported as boundary. The
/// certificate is a mixture of the two coherent states along +-l (or the
/// maximally mixed state for l = 0); rejections carry the witness
/// (j 1 - n.L) / (j (2j+1)).
Verdict first_moment_test(const Vector3& l, SpinNumber j);

/// 1/(2j+1) + sum_k a_k L_k with a_k = l_k / tr(L_k^2). Trace one with the
/// requested first moments; positive iff ||l|| <= (j+1)/3.
HermitianMatrix build_fixed_state(const Vector3& l, SpinNumber j);

/// Operators {1, S_11, S_12, S_13, S_22, S_23, S_33, L_1, L_2, L_3}, with
/// S_kl the symmetrized products, and their values for a moment matrix.
std::vector<HermitianMatrix> direct_operators(SpinNumber j);
std::vector<std::string> direct_operator_labels();
RealVector moment_vector(const MomentMatrix& m);

/// Phase-1 SDP over states on the spin-j space matching every entry of M.
/// Quantum iff t_star <= 1e-7, boundary if |t_star| <= 1e-7.
Verdict exact_test_direct(const MomentMatrix& m, const SdpSettings& settings = {});

/// The same SDP with only tr rho = 1 and tr(L_m rho) = l_m imposed.
Verdict exact_test_first_moments(const Vector3& l, SpinNumber j, const SdpSettings& settings = {});

/// Is rho the two-qubit marginal of a state on the symmetric subspace of
/// 2j qubits? The unknown lives in the (2j+1)-dim symmetric coordinates and
/// the marginal is taken through the symmetric isometry. Requires
/// 2 <= 2j <= 12 (CapacityExceeded beyond; use exact_test_direct).
Verdict exact_test_extension(const SymmetricTwoQubitState& rho, SpinNumber j,
                             const SdpSettings& settings = {});

inline constexpr int kMaxExtensionQubits = 12;

/// Inner set R: rho is a state with positive partial transpose.
bool inner_test(const HermitianMatrix& rho, double tol = kDefaultPsdTolerance);

/// Outer set T_j: rho is a state and tau_j(rho) is positive semidefinite.
/// false means certainly non-quantum.
bool outer_test(const HermitianMatrix& rho, SpinNumber j, double tol = kDefaultPsdTolerance);
bool outer_test(const MomentMatrix& m, double tol = kDefaultPsdTolerance);

struct WitnessReport {
  std::optional<Witness> witness;  // present iff value < -1e-7
  double optimal_value = 0.0;      // z . t of the best hyperplane, = -t_star
  double t_star = 0.0;
  SdpStatus solver_status = SdpStatus::numerical_failure;
};

/// Best separating hyperplane over the direct operator set.
WitnessReport witness_search(const MomentMatrix& m, const SdpSettings& settings = {});

struct ClassifyOptions {
  bool attach_witness = true;
  double psd_tolerance = kDefaultPsdTolerance;
  SdpSettings sdp;
};

/// validate -> chi precheck -> reconstruct rho_j -> inner (accept) ->
/// outer (reject) -> exact SDP. Early rejections are confirmed against the
/// SDP when a witness is requested, so they never contradict it.
Verdict classify(const MomentMatrix& m, const ClassifyOptions& options = {});

/// Unvalidated input; the structural check is recorded as the first stage
/// and its ConstraintViolation propagates.
Verdict classify(SpinNumber j, const Matrix3c& m, const ClassifyOptions& options = {});

}  // namespace spinmoment
