#include "spinmoment/reduction.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "spinmoment/errors.hpp"

namespace spinmoment {

namespace {

void require_two_qubit_marginal(SpinNumber j, const char* who) {
  if (j.two_j() < 2) {
    throw std::invalid_argument(std::string(who) +
                                ": j = 1/2 has no two-qubit marginal; use the first-moment test");
  }
}

// tr(A rho) for square A, rho of equal size.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& rho) {
  return a.cwiseProduct(rho.transpose()).sum();
}

}  // namespace

const ComplexMatrix& two_qubit_symmetric_basis() {
  static const ComplexMatrix v = symmetric_isometry(2).matrix;
  return v;
}

ComplexMatrix embed_two_qubit(const ComplexMatrix& rho3) {
  const ComplexMatrix& v = two_qubit_symmetric_basis();
  return v * rho3 * v.adjoint();
}

ComplexMatrix restrict_two_qubit(const ComplexMatrix& x4) {
  const ComplexMatrix& v = two_qubit_symmetric_basis();
  return v.adjoint() * x4 * v;
}

ReductionOperators reduction_operators(SpinNumber spin) {
  require_two_qubit_marginal(spin, "reduction_operators");
  const double n = spin.two_j();  // number of qubits, 2j
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  std::array<ComplexMatrix, 3> x;  // sigma_k / 2
  for (int k = 0; k < 3; ++k) x[k] = 0.5 * pauli(k + 1);

  ReductionOperators ops{spin, {}, {}};
  for (int k = 0; k < 3; ++k) {
    ops.lam1[k] = HermitianMatrix::symmetrized(restrict_two_qubit(n * kron(x[k], id2)));
    for (int l = 0; l < 3; ++l) {
      const ComplexMatrix full = n * kron(x[k] * x[l], id2) + n * (n - 1.0) * kron(x[k], x[l]);
      ops.lam2[k][l] = restrict_two_qubit(full);
    }
  }
  return ops;
}

const ReductionOperators& cached_reduction_operators(SpinNumber j) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const ReductionOperators>> table;
  std::lock_guard lock(mutex);
  auto it = table.find(j.two_j());
  if (it == table.end()) {
    it = table.emplace(j.two_j(), std::make_unique<const ReductionOperators>(reduction_operators(j)))
             .first;
  }
  return *it->second;
}

SymmetricTwoQubitState SymmetricTwoQubitState::create(const HermitianMatrix& rho) {
  if (rho.dim() != 3) {
    throw std::invalid_argument("SymmetricTwoQubitState: expected a 3x3 operator");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-10) {
    throw ConstraintViolation("trace", "symmetric two-qubit operator has trace " +
                                           std::to_string(rho.trace()));
  }
  return SymmetricTwoQubitState(rho);
}

Matrix3c moments_from_rho(const HermitianMatrix& rho, SpinNumber j) {
  const auto& ops = cached_reduction_operators(j);
  Matrix3c m;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) m(k, l) = trace_product(ops.lam2[k][l], rho.matrix());
  return m;
}

SymmetricTwoQubitState reconstruct_rho(SpinNumber j, const Matrix3c& m) {
  require_two_qubit_marginal(j, "reconstruct_rho");
  validate_moments(j, m);
  const auto& ops = cached_reduction_operators(j);
  const auto basis = hermitian_basis(3);
  // Second-moment rows are divided by j(j - 1/2) to keep the system O(1).
  const double scale = j.j() * (j.j() - 0.5);

  Eigen::Matrix<double, 19, 9> a;
  Eigen::Matrix<double, 19, 1> b;
  for (int p = 0; p < 9; ++p) a(0, p) = basis[p].trace();
  b(0) = 1.0;
  int row = 1;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      for (int p = 0; p < 9; ++p) {
        const Complex t = trace_product(ops.lam2[k][l], basis[p].matrix()) / scale;
        a(row, p) = t.real();
        a(row + 1, p) = t.imag();
      }
      b(row) = m(k, l).real() / scale;
      b(row + 1) = m(k, l).imag() / scale;
      row += 2;
    }
  }
  const Eigen::Matrix<double, 9, 1> params = a.colPivHouseholderQr().solve(b);
  const double residual = (a * params - b).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw ConstraintViolation("moment-consistency",
                              "no two-qubit operator reproduces M (residual " +
                                  std::to_string(residual) + ")");
  }
  ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
  for (int p = 0; p < 9; ++p) rho += params(p) * basis[p].matrix();
  HermitianMatrix h = HermitianMatrix::symmetrized(rho);
  // Remove rounding drift in the trace before the exact-trace check.
  h *= 1.0 / h.trace();
  return SymmetricTwoQubitState::create(h);
}

SymmetricTwoQubitState reconstruct_rho(const MomentMatrix& m) {
  return reconstruct_rho(m.spin(), m.matrix());
}

RenormalizedCoords renormalized_coords(const MomentMatrix& m) {
  const SpinNumber spin = m.spin();
  require_two_qubit_marginal(spin, "renormalized_coords");
  const double j = spin.j();
  RenormalizedCoords c;
  c.spin = spin;
  c.u = m.first_moments() / j;
  for (int k = 0; k < 3; ++k) {
    c.v(k) = m(k, k).real() / (j * (j - 0.5)) - 1.0 / (2.0 * j - 1.0);
  }
  return c;
}

MomentMatrix moments_from_coords(const RenormalizedCoords& c, const Vector3& real_offdiagonal) {
  require_two_qubit_marginal(c.spin, "moments_from_coords");
  const double vsum = c.v.sum();
  if (std::abs(vsum - 1.0) > 1e-9) {
    throw ConstraintViolation("casimir", "Casimir violated: sum of v_k is " +
                                             std::to_string(vsum) + ", expected 1");
  }
  const double j = c.spin.j();
  Matrix3c m = Matrix3c::Zero();
  m.imag() = antisymmetric_part(j * c.u);
  for (int k = 0; k < 3; ++k) m(k, k) = j * (j - 0.5) * c.v(k) + 0.5 * j;
  const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {0, 2}, {0, 1}}};
  for (int p = 0; p < 3; ++p) {
    const auto [k, l] = pairs[p];
    m(k, l) = Complex(real_offdiagonal(p), m(k, l).imag());
    m(l, k) = Complex(real_offdiagonal(p), m(l, k).imag());
  }
  return MomentMatrix::create(c.spin, m);
}

SymmetricTwoQubitState rho_from_coords(const Vector3& u, const Vector3& v) {
  RenormalizedCoords c;
  c.u = u;
  c.v = v;
  c.spin = SpinNumber(2);
  return reconstruct_rho(moments_from_coords(c));
}

ReducedEVM tau(const HermitianMatrix& rho, SpinNumber spin) {
  if (rho.dim() != 3) throw std::invalid_argument("tau: expected a 3x3 operator");
  const auto& ops = cached_reduction_operators(spin);
  const double j = spin.j();
  ComplexMatrix t(4, 4);
  t(0, 0) = rho.trace();
  for (int k = 0; k < 3; ++k) {
    const Complex mean = trace_product(ops.lam1[k].matrix(), rho.matrix()) / j;
    t(0, k + 1) = mean;
    t(k + 1, 0) = std::conj(mean);
    for (int l = 0; l < 3; ++l) {
      t(k + 1, l + 1) = trace_product(ops.lam2[k][l], rho.matrix()) / (j * j);
    }
  }
  return {HermitianMatrix::symmetrized(t)};
}

ReducedEVM tau(const SymmetricTwoQubitState& rho, SpinNumber j) { return tau(rho.rho(), j); }

double ppt_min_eigenvalue(const HermitianMatrix& rho) {
  return min_eigenvalue(
      HermitianMatrix::symmetrized(partial_transpose_b(embed_two_qubit(rho.matrix()))));
}

bool ppt_inner_test(const SymmetricTwoQubitState& rho, double tol) {
  return rho.is_state(tol) && ppt_min_eigenvalue(rho.rho()) >= -tol;
}

}  // namespace spinmoment
