#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include <spinmoment/feasibility.hpp>

namespace spinmoment::cli {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

ComplexMatrix ginibre(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  ComplexMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) a(i, k) = Complex(g(rng), g(rng));
  return a;
}

HermitianMatrix random_state(std::mt19937_64& rng, Eigen::Index dim) {
  std::uniform_int_distribution<int> rank(1, static_cast<int>(dim));
  const ComplexMatrix a = ginibre(rng, dim, rank(rng));
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return HermitianMatrix::symmetrized(rho);
}

class Suite {
 public:
  explicit Suite(std::ostream* progress) : progress_(progress) {}

  void add(std::string name, bool ok, std::string detail) {
    if (progress_) *progress_ << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    results_.push_back({std::move(name), ok, std::move(detail)});
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::ostream* progress_;
  std::vector<CheckResult> results_;
};

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& o, std::ostream* progress) {
  Suite suite(progress);
  std::mt19937_64 rng(o.seed);

  for (int two_j = 1; two_j <= o.two_j_max; ++two_j) {
    const auto report = validate_algebra(spin_operators(SpinNumber(two_j)));
    const std::string tag = "[2j=" + std::to_string(two_j) + "]";
    suite.add("commutator" + tag, report.commutator_residual < o.tol,
              fmt("residual %.3e (threshold %.1e)", report.commutator_residual, o.tol));
    suite.add("casimir" + tag, report.casimir_residual < o.tol,
              fmt("residual %.3e (threshold %.1e)", report.casimir_residual, o.tol));
  }

  // min tr(C X) over states is the smallest eigenvalue of C.
  {
    std::uniform_int_distribution<int> dim(1, 5);
    double worst_err = 0.0, worst_gap = 0.0;
    bool all_optimal = true;
    for (int i = 0; i < o.samples; ++i) {
      const Eigen::Index n = dim(rng);
      const ComplexMatrix a = ginibre(rng, n, n);
      const HermitianMatrix c = HermitianMatrix::symmetrized(a + a.adjoint());
      SdpProblem p{n, c, {{HermitianMatrix::identity(n), 1.0}}};
      const SdpSolution s = solve(p);
      all_optimal = all_optimal && s.status == SdpStatus::optimal;
      worst_err = std::max(worst_err, std::abs(s.primal_objective - min_eigenvalue(c)));
      worst_gap = std::max(worst_gap, std::abs(s.gap));
    }
    suite.add("sdp-oracle", all_optimal && worst_err <= 1e-6 && worst_gap <= 1e-8,
              fmt("max |objective - lambda_min| %.2e, max gap %.2e", worst_err, worst_gap));
  }

  // Round trip M -> rho_j -> M.
  {
    double worst = 0.0;
    for (int two_j : {2, 3, 6, 11}) {
      const SpinNumber j(two_j);
      for (int i = 0; i < o.samples / 5 + 1; ++i) {
        const MomentMatrix m = moment_matrix(random_state(rng, j.dim()), spin_operators(j));
        const Matrix3c back = moments_from_rho(reconstruct_rho(m).rho(), j);
        worst = std::max(worst, (back - m.matrix()).cwiseAbs().maxCoeff() / std::max(1.0, j.casimir()));
      }
    }
    suite.add("reduction-roundtrip", worst < std::max(o.tol, 1e-12) * 1e2,
              fmt("max relative moment error %.3e", worst));
  }

  // Sandwich R => S_j => T_j on random symmetric two-qubit states.
  for (int two_j : {4, 10}) {
    const SpinNumber j(two_j);
    int violations = 0, inner = 0, exact = 0, outer = 0;
    for (int i = 0; i < o.samples; ++i) {
      const HermitianMatrix rho = random_state(rng, 3);
      const bool in_r = inner_test(rho, 1e-7);
      const bool in_t = outer_test(rho, j, 1e-7);
      const MomentMatrix m = MomentMatrix::create(j, moments_from_rho(rho, j));
      const bool in_s = exact_test_direct(m).status != VerdictStatus::non_quantum;
      inner += in_r;
      exact += in_s;
      outer += in_t;
      violations += (in_r && !in_s) + (in_s && !in_t);
    }
    suite.add("sandwich[2j=" + std::to_string(two_j) + "]", violations == 0,
              std::to_string(violations) + " violations; R " + std::to_string(inner) + ", S " +
                  std::to_string(exact) + ", T " + std::to_string(outer) + " of " + std::to_string(o.samples));
  }

  // Witness value equals -t* and Z is a unit-trace positive operator.
  {
    const SpinNumber j(10);
    std::uniform_real_distribution<double> uni(-0.4, 1.2);
    int checked = 0;
    double worst_dual = 0.0, worst_psd = 0.0, worst_trace = 0.0;
    for (int i = 0; i < 4 * o.samples && checked < o.samples / 2 + 1; ++i) {
      RenormalizedCoords c;
      c.spin = j;
      c.u = Vector3(uni(rng), uni(rng), uni(rng)) * 0.4;
      const double v1 = uni(rng), v2 = uni(rng);
      c.v = Vector3(v1, v2, 1.0 - v1 - v2);
      const MomentMatrix m = moments_from_coords(c);
      const WitnessReport w = witness_search(m);
      if (!w.witness) continue;
      ++checked;
      worst_dual = std::max(worst_dual, std::abs(w.witness->value + w.t_star));
      worst_psd = std::max(worst_psd, -min_eigenvalue(w.witness->Z));
      worst_trace = std::max(worst_trace, std::abs(w.witness->Z.trace() - 1.0));
    }
    suite.add("witness-duality", checked > 0 && worst_dual <= 1e-6 && worst_psd <= 1e-9 && worst_trace <= 1e-9,
              std::to_string(checked) + " witnesses; max |value + t*| " + fmt("%.2e", worst_dual) +
                  ", min eig(Z) " + fmt("%.2e", -worst_psd));
  }
  return suite.take();
}

}  // namespace spinmoment::cli
