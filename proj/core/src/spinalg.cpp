#include "spinmoment/spinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spinmoment/errors.hpp"

namespace spinmoment {

SpinNumber::SpinNumber(int two_j) : two_j_(two_j) {
  if (two_j < 1) {
    throw std::invalid_argument("SpinNumber: two_j must be >= 1, got " + std::to_string(two_j));
  }
}

SpinOperatorTriple spin_operators(SpinNumber spin) {
  const int d = spin.dim();
  const double j = spin.j();
  ComplexMatrix raise = ComplexMatrix::Zero(d, d);
  ComplexMatrix lz = ComplexMatrix::Zero(d, d);
  // Basis index a <-> magnetic number m = j - a.
  for (int a = 0; a < d; ++a) {
    const double m = j - a;
    lz(a, a) = m;
    if (a > 0) raise(a - 1, a) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  const ComplexMatrix lx = (raise + lower) * 0.5;
  const ComplexMatrix ly = (raise - lower) * Complex(0.0, -0.5);
  return {spin, {HermitianMatrix(lx), HermitianMatrix(ly), HermitianMatrix(lz)}};
}

SpinOperatorTriple rotate_triple(const SpinOperatorTriple& t, const Matrix3& rotation) {
  SpinOperatorTriple out = t;
  for (int k = 0; k < 3; ++k) {
    HermitianMatrix acc = HermitianMatrix::zero(t.spin.dim());
    for (int m = 0; m < 3; ++m) acc += t.L[m] * rotation(k, m);
    out.L[k] = acc;
  }
  return out;
}

int levi_civita(int k, int l, int m) {
  if (k == l || l == m || k == m) return 0;
  return ((l - k + 3) % 3 == 1) ? 1 : -1;
}

AlgebraReport validate_algebra(const SpinOperatorTriple& t) {
  AlgebraReport report;
  const Eigen::Index d = t.spin.dim();
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      const ComplexMatrix& a = t.L[k].matrix();
      const ComplexMatrix& b = t.L[l].matrix();
      ComplexMatrix diff = a * b - b * a;
      for (int m = 0; m < 3; ++m) {
        const int eps = levi_civita(k, l, m);
        if (eps != 0) diff -= Complex(0.0, eps) * t.L[m].matrix();
      }
      report.commutator_residual = std::max(report.commutator_residual, max_abs(diff));
    }
  }
  ComplexMatrix cas = -t.spin.casimir() * ComplexMatrix::Identity(d, d);
  for (const auto& l : t.L) cas += l.matrix() * l.matrix();
  report.casimir_residual = max_abs(cas);
  return report;
}

Vector3 extract_first_moments(const Matrix3c& m, double tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int k = 0; k < 3; ++k) {
    if (std::abs(m(k, k).imag()) > tol * scale) {
      throw ConstraintViolation("first-moment-consistency",
                                "diagonal entry M" + std::to_string(k + 1) + std::to_string(k + 1) +
                                    " has a nonzero imaginary part");
    }
    for (int l = k + 1; l < 3; ++l) {
      if (std::abs(m(k, l).imag() + m(l, k).imag()) > tol * scale) {
        throw ConstraintViolation("first-moment-consistency",
                                  "Im(M" + std::to_string(k + 1) + std::to_string(l + 1) +
                                      ") != -Im(M" + std::to_string(l + 1) +
                                      std::to_string(k + 1) + ")");
      }
    }
  }
  // Im(M_kl) = eps_klm l_m / 2, averaged over both members of each pair.
  Vector3 l;
  l(0) = m(1, 2).imag() - m(2, 1).imag();
  l(1) = m(2, 0).imag() - m(0, 2).imag();
  l(2) = m(0, 1).imag() - m(1, 0).imag();
  return l;
}

void validate_moments(SpinNumber j, const Matrix3c& m, double tol) {
  if (!m.allFinite()) throw ConstraintViolation("finiteness", "moment matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int k = 0; k < 3; ++k) {
    for (int l = k + 1; l < 3; ++l) {
      if (std::abs(m(k, l).real() - m(l, k).real()) > tol * scale) {
        throw ConstraintViolation("hermiticity", "Re(M" + std::to_string(k + 1) +
                                                     std::to_string(l + 1) + ") != Re(M" +
                                                     std::to_string(l + 1) +
                                                     std::to_string(k + 1) + ")");
      }
    }
  }
  const Vector3 first = extract_first_moments(m, tol);
  const double trace = m.diagonal().real().sum();
  if (std::abs(trace - j.casimir()) > tol * std::max(1.0, j.casimir())) {
    throw ConstraintViolation("casimir", "Casimir violated: tr Re(M) = " + std::to_string(trace) +
                                             ", expected j(j+1) = " + std::to_string(j.casimir()));
  }
  if (j.two_j() == 1) {
    // L_k L_l = delta_kl/4 + (i/2) eps_klm L_m for spin 1/2.
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        const double expected = (k == l) ? 0.25 : 0.0;
        if (std::abs(m(k, l).real() - expected) > tol) {
          throw ConstraintViolation("spin-half-second-moments",
                                    "for j = 1/2 the symmetric second moments are fixed to "
                                    "delta_kl / 4");
        }
      }
    }
  }
  (void)first;
}

MomentMatrix MomentMatrix::create(SpinNumber j, const Matrix3c& m, double tol) {
  validate_moments(j, m, tol);
  Matrix3c sym = (m + m.adjoint()) * 0.5;
  for (int k = 0; k < 3; ++k) sym(k, k) = Complex(sym(k, k).real(), 0.0);
  return MomentMatrix(j, sym, extract_first_moments(sym, tol));
}

Matrix3c raw_moments(const HermitianMatrix& a, const SpinOperatorTriple& t) {
  if (a.dim() != t.spin.dim()) {
    throw std::invalid_argument("raw_moments: operator dimension " + std::to_string(a.dim()) +
                                " does not match 2j+1 = " + std::to_string(t.spin.dim()));
  }
  Matrix3c m;
  std::array<ComplexMatrix, 3> la;
  for (int l = 0; l < 3; ++l) la[l] = t.L[l].matrix() * a.matrix();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) m(k, l) = (t.L[k].matrix().cwiseProduct(la[l].transpose())).sum();
  return m;
}

MomentMatrix moment_matrix(const HermitianMatrix& rho, const SpinOperatorTriple& t) {
  if (rho.dim() != t.spin.dim()) {
    throw ConstraintViolation("state", "density operator has dimension " +
                                           std::to_string(rho.dim()) + ", expected " +
                                           std::to_string(t.spin.dim()));
  }
  if (std::abs(rho.trace() - 1.0) > 1e-9) {
    throw ConstraintViolation("state", "trace is " + std::to_string(rho.trace()) + ", not 1");
  }
  if (!is_psd(rho)) throw ConstraintViolation("state", "operator is not positive semidefinite");
  return MomentMatrix::create(t.spin, raw_moments(rho, t));
}

ExpectationValueMatrix4 chi_matrix(const MomentMatrix& m) {
  ComplexMatrix chi(4, 4);
  chi(0, 0) = 1.0;
  for (int k = 0; k < 3; ++k) {
    chi(0, k + 1) = m.first_moments()(k);
    chi(k + 1, 0) = m.first_moments()(k);
    for (int l = 0; l < 3; ++l) chi(k + 1, l + 1) = m(k, l);
  }
  return {HermitianMatrix(chi)};
}

Matrix3 antisymmetric_part(const Vector3& l) {
  Matrix3 a = Matrix3::Zero();
  for (int k = 0; k < 3; ++k)
    for (int q = 0; q < 3; ++q)
      for (int m = 0; m < 3; ++m) a(k, q) += 0.5 * levi_civita(k, q, m) * l(m);
  return a;
}

Matrix3c StandardForm::reassemble() const {
  Matrix3c out = Matrix3c::Zero();
  out.real() = diagonal.asDiagonal();
  out.imag() = antisymmetric_part(first_moments);
  return out;
}

StandardForm standard_form(const MomentMatrix& m) {
  const Matrix3 re = m.matrix().real();
  Eigen::SelfAdjointEigenSolver<Matrix3> solver(re);
  // Descending order.
  Vector3 values = solver.eigenvalues().reverse();
  Matrix3 q = solver.eigenvectors().rowwise().reverse();

  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const double degenerate = 1e-9 * scale;
  int start = 0;
  while (start < 3) {
    int end = start + 1;
    while (end < 3 && std::abs(values(end) - values(start)) <= degenerate) ++end;
    const int g = end - start;
    // Orthogonal Procrustes inside the eigenspace: rotate the block towards
    // the matching columns of the identity.
    Eigen::MatrixXd block = q.middleCols(start, g);
    Eigen::MatrixXd target = Matrix3::Identity().middleCols(start, g);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block.transpose() * target,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    q.middleCols(start, g) = block * (svd.matrixU() * svd.matrixV().transpose());
    start = end;
  }
  if (q.determinant() < 0.0) {
    int flip = 0;
    for (int k = 1; k < 3; ++k)
      if (q(k, k) < q(flip, flip)) flip = k;
    q.col(flip) *= -1.0;
  }

  StandardForm sf;
  sf.rotation = q.transpose();
  sf.diagonal = values;
  sf.first_moments = sf.rotation * m.first_moments();
  return sf;
}

}  // namespace spinmoment
