#pragma once

// Product-state decompositions of symmetric two-qubit states and the
// spin-coherent states they lift to.

#include <optional>
#include <vector>

#include "spinmoment/matcore.hpp"
#include "spinmoment/spinalg.hpp"

namespace spinmoment {

using Qubit = Eigen::Vector2cd;

/// weight * |a><a| (x) |a><a| with |a> normalized.
struct ProductTerm {
  double weight = 0.0;
  Qubit qubit = Qubit(1.0, 0.0);
};

/// rho (3x3, symmetric two-qubit basis) = sum_m weight_m |a_m a_m><a_m a_m|.
/// Uses the concurrence construction: succeeds exactly for separable input
/// (for two qubits this is PPT) and returns nullopt otherwise, or when the
/// reconstruction misses rho by more than `tol` in max norm.
std::optional<std::vector<ProductTerm>> symmetric_separable_decomposition(
    const HermitianMatrix& rho, double tol = 1e-8);

/// Unit qubit pointing along the Bloch direction n (any nonzero n).
Qubit bloch_qubit(const Vector3& direction);

/// |j; a> = |a>^{(x) 2j} in the symmetric basis (index k <-> m = j - k):
/// c_k = sqrt(C(2j, k)) a_0^{2j-k} a_1^k.
ComplexVector coherent_spin_state(SpinNumber j, const Qubit& a);

/// Spin-coherent state with <L> = j n / |n|.
ComplexVector coherent_spin_state(SpinNumber j, const Vector3& direction);

/// sum_m weight_m |j; a_m><j; a_m|
HermitianMatrix lift_product_terms(SpinNumber j, const std::vector<ProductTerm>& terms);

}  // namespace spinmoment
