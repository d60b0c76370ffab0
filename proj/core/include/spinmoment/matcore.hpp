#pragma once

// Dense complex / Hermitian linear algebra shared by the rest of the
// library. Storage is Eigen; everything here is a pure function of its
// arguments.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace spinmoment {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kDefaultPsdTolerance = 1e-8;

/// A square complex matrix equal to its conjugate transpose.
///
/// Construction from an arbitrary matrix accepts inputs that are Hermitian
/// up to `kHermitianTolerance` (relative to the largest entry, floored at
/// 1) and stores the symmetrized (H + H^†)/2, so the diagonal is exactly
/// real. Anything further from Hermitian is rejected with
/// ConstraintViolation("hermiticity").
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kHermitianTolerance);
  explicit HermitianMatrix(const RealMatrix& m, double tol = kHermitianTolerance);

  /// Symmetrize without the tolerance check. Intended for numerical
  /// pipelines whose outputs are Hermitian up to rounding by construction.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);
  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix zero(Eigen::Index n);
  static HermitianMatrix diagonal(const RealVector& d);
  /// |psi><psi| (no normalization applied).
  static HermitianMatrix projector(const ComplexVector& psi);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }
  double trace() const { return m_.diagonal().real().sum(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

 private:
  struct Unchecked {};
  HermitianMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

/// Real Hilbert-Schmidt inner product Re tr(A^† B); for Hermitian
/// arguments this is tr(A B).
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
inline double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return hs_inner(a.matrix(), b.matrix());
}

/// max_{ij} |A_ij|
double max_abs(const ComplexMatrix& a);

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors, unitary
};

EigenDecomposition hermitian_eig(const HermitianMatrix& h);
/// Validates Hermiticity first (ConstraintViolation on failure).
EigenDecomposition hermitian_eig(const ComplexMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);
bool is_psd(const HermitianMatrix& h, double tol = kDefaultPsdTolerance);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Partial transpose on the second tensor factor of C^{dim_a} (x) C^{dim_b}:
/// out(i k, j l) = in(i l, j k).
ComplexMatrix partial_transpose_b(const ComplexMatrix& x, Eigen::Index dim_a = 2,
                                  Eigen::Index dim_b = 2);

enum class Subsystem { A, B };

/// Trace out one factor of C^{dim_a} (x) C^{dim_b}, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& x, Eigen::Index dim_a, Eigen::Index dim_b,
                            Subsystem keep);

inline constexpr int kDefaultMaxQubits = 12;

/// Isometry V : C^{n+1} -> (C^2)^{(x) n} onto the symmetric subspace.
/// Column m is the normalized sum of computational basis states of Hamming
/// weight m (qubit 1 is the most significant bit; |0> is spin-up).
struct SymmetricIsometry {
  int qubits = 0;
  ComplexMatrix matrix;  // 2^n x (n+1)
};

SymmetricIsometry symmetric_isometry(int qubits, int max_qubits = kDefaultMaxQubits);

/// Pauli matrices: 0 -> identity, 1..3 -> sigma_x, sigma_y, sigma_z, with
/// sigma_z |0> = +|0>.
ComplexMatrix pauli(int k);

/// Hilbert-Schmidt orthonormal basis of the n x n Hermitian matrices:
/// E_aa, (E_ab + E_ba)/sqrt(2) and i(E_ab - E_ba)/sqrt(2) for a < b.
std::vector<HermitianMatrix> hermitian_basis(Eigen::Index n);

/// Binomial coefficient as a double (exact for the small arguments used here).
double binomial(int n, int k);

/// Clip eigenvalues in (-dust, 0) to zero and renormalize the trace to one.
/// Eigenvalues below -dust are left untouched (the result is then not a
/// state, which callers must detect themselves).
HermitianMatrix clip_to_state(const HermitianMatrix& rho, double dust = 1e-9);

}  // namespace spinmoment
