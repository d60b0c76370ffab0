#include "spinmoment/matcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "spinmoment/errors.hpp"

namespace spinmoment {

namespace {

ComplexMatrix check_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ConstraintViolation("hermiticity", "matrix is " + std::to_string(m.rows()) + "x" +
                                                 std::to_string(m.cols()) + ", not square");
  }
  if (!m.allFinite()) throw ConstraintViolation("finiteness", "matrix has non-finite entries");
  const double scale = std::max(1.0, max_abs(m));
  const double asym = m.size() == 0 ? 0.0 : max_abs(m - m.adjoint());
  if (asym > tol * scale) {
    throw ConstraintViolation("hermiticity",
                              "max |H - H^dagger| = " + std::to_string(asym) + " exceeds tolerance");
  }
  ComplexMatrix h = (m + m.adjoint()) * 0.5;
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
  return h;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) : m_(check_hermitian(m, tol)) {}

HermitianMatrix::HermitianMatrix(const RealMatrix& m, double tol)
    : m_(check_hermitian(m.cast<Complex>(), tol)) {}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  ComplexMatrix h = (m + m.adjoint()) * 0.5;
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
  return HermitianMatrix(std::move(h), Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return HermitianMatrix(ComplexMatrix::Identity(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  return HermitianMatrix(ComplexMatrix::Zero(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  return HermitianMatrix(d.cast<Complex>().asDiagonal().toDenseMatrix(), Unchecked{});
}

HermitianMatrix HermitianMatrix::projector(const ComplexVector& psi) {
  return symmetrized(psi * psi.adjoint());
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ + o.m_, Unchecked{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ - o.m_, Unchecked{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s, Unchecked{});
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().array() * b.array()).real().sum();
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
  if (h.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  return hermitian_eig(HermitianMatrix(h));
}

double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_psd(const HermitianMatrix& h, double tol) { return min_eigenvalue(h) >= -tol; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_transpose_b(const ComplexMatrix& x, Eigen::Index dim_a, Eigen::Index dim_b) {
  const Eigen::Index d = dim_a * dim_b;
  if (x.rows() != d || x.cols() != d) {
    throw std::invalid_argument("partial_transpose_b: expected " + std::to_string(d) + "x" +
                                std::to_string(d) + " input");
  }
  ComplexMatrix out(d, d);
  for (Eigen::Index i = 0; i < dim_a; ++i)
    for (Eigen::Index k = 0; k < dim_b; ++k)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index l = 0; l < dim_b; ++l)
          out(i * dim_b + k, j * dim_b + l) = x(i * dim_b + l, j * dim_b + k);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& x, Eigen::Index dim_a, Eigen::Index dim_b,
                            Subsystem keep) {
  const Eigen::Index d = dim_a * dim_b;
  if (dim_a < 1 || dim_b < 1 || x.rows() != d || x.cols() != d) {
    throw std::invalid_argument("partial_trace: dimensions " + std::to_string(dim_a) + "x" +
                                std::to_string(dim_b) + " do not match a " +
                                std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                                " input");
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k) out(i, j) += x(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index k = 0; k < dim_a; ++k) out += x.block(k * dim_b, k * dim_b, dim_b, dim_b);
  return out;
}

std::vector<HermitianMatrix> hermitian_basis(Eigen::Index n) {
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index a = 0; a < n; ++a) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(a, a) = 1.0;
    basis.push_back(HermitianMatrix::symmetrized(e));
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      ComplexMatrix re = ComplexMatrix::Zero(n, n);
      re(a, b) = r;
      re(b, a) = r;
      basis.push_back(HermitianMatrix::symmetrized(re));
      ComplexMatrix im = ComplexMatrix::Zero(n, n);
      im(a, b) = Complex(0.0, r);
      im(b, a) = Complex(0.0, -r);
      basis.push_back(HermitianMatrix::symmetrized(im));
    }
  }
  return basis;
}

ComplexMatrix pauli(int k) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index must be in 0..3");
  }
  return s;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

SymmetricIsometry symmetric_isometry(int qubits, int max_qubits) {
  if (qubits < 1) throw std::invalid_argument("symmetric_isometry: need at least one qubit");
  if (qubits > max_qubits) {
    throw CapacityExceeded("symmetric_isometry: " + std::to_string(qubits) +
                           " qubits exceeds the configured cap of " + std::to_string(max_qubits));
  }
  const Eigen::Index full = Eigen::Index{1} << qubits;
  SymmetricIsometry iso;
  iso.qubits = qubits;
  iso.matrix = ComplexMatrix::Zero(full, qubits + 1);
  for (Eigen::Index x = 0; x < full; ++x) {
    const int weight = std::popcount(static_cast<unsigned long long>(x));
    iso.matrix(x, weight) = 1.0 / std::sqrt(binomial(qubits, weight));
  }
  return iso;
}

HermitianMatrix clip_to_state(const HermitianMatrix& rho, double dust) {
  auto eig = hermitian_eig(rho);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) < 0.0 && eig.values(i) > -dust) eig.values(i) = 0.0;
  }
  const double tr = eig.values.sum();
  ComplexMatrix m = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  if (tr > 0.0) m /= tr;
  return HermitianMatrix::symmetrized(m);
}

}  // namespace spinmoment
