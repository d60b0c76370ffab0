#include "spinmoment/separable.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "spinmoment/reduction.hpp"

namespace spinmoment {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Phases (alpha, beta) with a e^{i alpha} + b e^{i beta} = d, where
// |a - b| <= d <= a + b.
std::pair<double, double> triangle(double a, double b, double d) {
  if (d <= 0.0) return {0.0, kPi};
  if (a <= 0.0) return {0.0, 0.0};
  const double c = std::clamp((a * a + d * d - b * b) / (2.0 * a * d), -1.0, 1.0);
  const double alpha = std::acos(c);
  const double beta = std::atan2(-a * std::sin(alpha), d - a * std::cos(alpha));
  return {alpha, beta};
}

// Unitary U with tau = U diag(s) U^T, s >= 0, for complex symmetric tau.
ComplexMatrix takagi(const ComplexMatrix& tau) {
  const Eigen::Index n = tau.rows();
  const RealMatrix b = tau.real();
  const RealMatrix c = tau.imag();
  RealMatrix h(2 * n, 2 * n);
  h << b, c, c, -b;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(0.5 * (h + h.transpose()));
  ComplexMatrix u(n, n);
  Eigen::Index found = 0;
  for (Eigen::Index col = 2 * n - 1; col >= 0 && found < n; --col) {
    ComplexVector w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i) = Complex(eig.eigenvectors()(i, col), eig.eigenvectors()(n + i, col));
    }
    for (Eigen::Index k = 0; k < found; ++k) w -= u.col(k).dot(w) * u.col(k);
    const double norm = w.norm();
    if (norm < 0.5) continue;
    u.col(found++) = w / norm;
  }
  return u;
}

Complex ipow(Complex z, int k) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

Qubit qubit_from_symmetric(const ComplexVector& s) {
  Complex a, b;
  if (std::abs(s(0)) >= std::abs(s(2))) {
    a = std::sqrt(s(0));
    b = s(1) / (std::sqrt(2.0) * a);
  } else {
    b = std::sqrt(s(2));
    a = s(1) / (std::sqrt(2.0) * b);
  }
  Qubit q(a, b);
  return q / q.norm();
}

}  // namespace

std::optional<std::vector<ProductTerm>> symmetric_separable_decomposition(
    const HermitianMatrix& rho, double tol) {
  if (rho.dim() != 3) throw std::invalid_argument("symmetric_separable_decomposition: expected 3x3");
  const ComplexMatrix& v2 = two_qubit_symmetric_basis();
  const auto eig = hermitian_eig(HermitianMatrix::symmetrized(embed_two_qubit(rho.matrix())));
  if (eig.values(0) < -tol) return std::nullopt;

  ComplexMatrix v(4, 4);  // columns: subnormalized eigenvectors
  for (int i = 0; i < 4; ++i) v.col(i) = std::sqrt(std::max(eig.values(i), 0.0)) * eig.vectors.col(i);

  const ComplexMatrix yy = kron(pauli(2), pauli(2));
  const ComplexMatrix tau = v.adjoint() * yy * v.conjugate();
  const ComplexMatrix u = takagi(0.5 * (tau + tau.transpose()));
  ComplexMatrix x = v * u;
  const ComplexMatrix d = u.adjoint() * tau * u.conjugate();

  std::array<double, 4> s{};
  std::array<int, 4> order{0, 1, 2, 3};
  for (int i = 0; i < 4; ++i) s[i] = std::max(0.0, d(i, i).real());
  std::sort(order.begin(), order.end(), [&](int p, int q) { return s[p] > s[q]; });
  std::array<double, 4> sig{};
  ComplexMatrix xs(4, 4);
  for (int i = 0; i < 4; ++i) {
    sig[i] = s[order[i]];
    xs.col(i) = x.col(order[i]);
  }
  if (sig[0] - sig[1] - sig[2] - sig[3] > tol) return std::nullopt;  // entangled

  const double split = std::max(sig[0] - sig[1], sig[2] - sig[3]);
  const auto [p0, p1] = triangle(sig[0], sig[1], split);
  const auto [p2, p3] = triangle(sig[2], sig[3], split);
  const std::array<double, 4> phi{p0, p1, p2 + kPi, p3 + kPi};
  for (int k = 0; k < 4; ++k) xs.col(k) *= std::polar(1.0, -phi[k] / 2.0);

  std::vector<ProductTerm> terms;
  ComplexMatrix rebuilt = ComplexMatrix::Zero(3, 3);
  static const std::array<std::array<double, 4>, 4> hadamard{
      {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}}};
  for (int m = 0; m < 4; ++m) {
    ComplexVector z = ComplexVector::Zero(4);
    for (int k = 0; k < 4; ++k) z += 0.5 * hadamard[m][k] * xs.col(k);
    const ComplexVector sym = v2.adjoint() * z;
    const double weight = sym.squaredNorm();
    if (weight <= 1e-15) continue;
    ProductTerm term{weight, qubit_from_symmetric(sym / std::sqrt(weight))};
    const ComplexVector psi = coherent_spin_state(SpinNumber(2), term.qubit);
    rebuilt += weight * psi * psi.adjoint();
    terms.push_back(term);
  }
  if (max_abs(rebuilt - rho.matrix()) > tol) return std::nullopt;
  return terms;
}

Qubit bloch_qubit(const Vector3& direction) {
  const double r = direction.norm();
  if (r == 0.0) throw std::invalid_argument("bloch_qubit: zero direction");
  const Vector3 n = direction / r;
  const double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  const double phi = std::atan2(n(1), n(0));
  return Qubit(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi));
}

ComplexVector coherent_spin_state(SpinNumber j, const Qubit& a) {
  const int n = j.two_j();
  const Qubit q = a / a.norm();
  ComplexVector c(n + 1);
  for (int k = 0; k <= n; ++k) {
    c(k) = std::sqrt(binomial(n, k)) * ipow(q(0), n - k) * ipow(q(1), k);
  }
  return c;
}

ComplexVector coherent_spin_state(SpinNumber j, const Vector3& direction) {
  return coherent_spin_state(j, bloch_qubit(direction));
}

HermitianMatrix lift_product_terms(SpinNumber j, const std::vector<ProductTerm>& terms) {
  ComplexMatrix m = ComplexMatrix::Zero(j.dim(), j.dim());
  for (const auto& t : terms) {
    const ComplexVector psi = coherent_spin_state(j, t.qubit);
    m += t.weight * psi * psi.adjoint();
  }
  return HermitianMatrix::symmetrized(m);
}

}  // namespace spinmoment
