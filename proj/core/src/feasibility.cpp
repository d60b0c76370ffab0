#include "spinmoment/feasibility.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include "spinmoment/errors.hpp"
#include "spinmoment/separable.hpp"

namespace spinmoment {

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::quantum: return "quantum";
    case VerdictStatus::non_quantum: return "non-quantum";
    case VerdictStatus::boundary: return "boundary";
  }
  return "unknown";
}

double Witness::evaluate(const RealVector& b) const {
  if (b.size() != coefficients.size()) {
    throw std::invalid_argument("Witness::evaluate: expected " + std::to_string(coefficients.size()) +
                                " moment values, got " + std::to_string(b.size()));
  }
  return coefficients.dot(b);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Operators O_0 = 1, O_1, ... with their measured values.
struct OperatorSet {
  std::vector<HermitianMatrix> ops;
  std::vector<double> values;
  std::vector<std::string> labels;
};

Witness make_witness(const Phase1Result& res, const std::vector<std::string>& labels) {
  Witness w;
  w.z = res.witness_coefficients;
  w.Z = res.witness;
  w.value = res.witness_value;
  w.coefficients = res.basis.transform.transpose() * w.z;
  w.labels = labels;
  return w;
}

Phase1Result run_phase1(const OperatorSet& set, Eigen::Index dim, const SdpSettings& settings) {
  std::vector<LinearConstraint> cons;
  for (std::size_t i = 1; i < set.ops.size(); ++i) cons.push_back({set.ops[i], set.values[i]});
  Phase1Result res = phase1_min_t(cons, dim, settings);
  if (res.solution.status != SdpStatus::optimal) {
    throw SolverFailure(std::string("phase-1 SDP ended with ") + to_string(res.solution.status) +
                        ": " + res.solution.message);
  }
  return res;
}

Verdict phase1_verdict(const OperatorSet& set, Eigen::Index dim, const SdpSettings& settings,
                       const std::string& stage) {
  const auto t0 = Clock::now();
  const Phase1Result res = run_phase1(set, dim, settings);
  Verdict v;
  v.stage = stage;
  v.t_star = res.t_star;
  if (res.t_star <= kBoundaryBand) {
    v.status = std::abs(res.t_star) <= kBoundaryBand ? VerdictStatus::boundary : VerdictStatus::quantum;
    v.certificate = clip_to_state(res.x, std::max(1e-9, 2.0 * std::abs(res.t_star)));
  } else {
    v.status = VerdictStatus::non_quantum;
    v.certificate = make_witness(res, set.labels);
  }
  v.tests_run.push_back({stage, std::string(to_string(v.status)) + " (t* = " +
                                    std::to_string(res.t_star) + ")",
                         seconds_since(t0)});
  return v;
}

OperatorSet direct_set(const MomentMatrix& m) {
  OperatorSet set;
  set.ops = direct_operators(m.spin());
  set.labels = direct_operator_labels();
  const RealVector b = moment_vector(m);
  set.values.assign(b.data(), b.data() + b.size());
  return set;
}

OperatorSet first_moment_set(const Vector3& l, SpinNumber j) {
  const auto t = spin_operators(j);
  OperatorSet set;
  set.ops = {HermitianMatrix::identity(j.dim()), t.L[0], t.L[1], t.L[2]};
  set.values = {1.0, l(0), l(1), l(2)};
  set.labels = {"1", "L1", "L2", "L3"};
  return set;
}

}  // namespace

HermitianMatrix build_fixed_state(const Vector3& l, SpinNumber j) {
  const auto t = spin_operators(j);
  const double jj = j.j();
  const double norm2 = jj * (jj + 1.0) * (2.0 * jj + 1.0) / 3.0;  // tr(L_k^2)
  HermitianMatrix rho = HermitianMatrix::identity(j.dim()) * (1.0 / j.dim());
  for (int k = 0; k < 3; ++k) rho += t.L[k] * (l(k) / norm2);
  return rho;
}

Verdict first_moment_test(const Vector3& l, SpinNumber j) {
  const auto t0 = Clock::now();
  const double jj = j.j();
  const double r = l.norm();
  Verdict v;
  v.stage = "first-moment";
  if (r <= jj || std::abs(r - jj) <= 1e-9 * jj) {
    v.status = std::abs(r - jj) <= 1e-9 * jj ? VerdictStatus::boundary : VerdictStatus::quantum;
    if (r == 0.0) {
      v.certificate = HermitianMatrix::identity(j.dim()) * (1.0 / j.dim());
    } else {
      const double p = 0.5 * (1.0 + std::min(r / jj, 1.0));
      const ComplexVector up = coherent_spin_state(j, Vector3(l));
      const ComplexVector down = coherent_spin_state(j, Vector3(-l));
      v.certificate = HermitianMatrix::symmetrized(p * up * up.adjoint() +
                                                   (1.0 - p) * down * down.adjoint());
    }
  } else {
    v.status = VerdictStatus::non_quantum;
    const OperatorSet set = first_moment_set(l, j);
    const Vector3 n = l / r;
    HermitianMatrix z = HermitianMatrix::identity(j.dim()) * jj;
    for (int k = 0; k < 3; ++k) z += set.ops[k + 1] * (-n(k));
    z *= 1.0 / (jj * (2.0 * jj + 1.0));
    const OrthonormalBasis basis = orthonormalize(set.ops, set.values);
    Witness w;
    w.z.resize(static_cast<Eigen::Index>(basis.ops.size()));
    for (std::size_t k = 0; k < basis.ops.size(); ++k) {
      w.z(static_cast<Eigen::Index>(k)) = hs_inner(basis.ops[k], z);
    }
    w.Z = z;
    w.value = w.z.dot(basis.values);
    w.coefficients = basis.transform.transpose() * w.z;
    w.labels = set.labels;
    v.certificate = std::move(w);
  }
  v.tests_run.push_back({v.stage, to_string(v.status), seconds_since(t0)});
  return v;
}

std::vector<HermitianMatrix> direct_operators(SpinNumber j) {
  const auto t = spin_operators(j);
  std::vector<HermitianMatrix> ops{HermitianMatrix::identity(j.dim())};
  for (int k = 0; k < 3; ++k) {
    for (int l = k; l < 3; ++l) {
      const ComplexMatrix& a = t.L[k].matrix();
      const ComplexMatrix& b = t.L[l].matrix();
      ops.push_back(HermitianMatrix::symmetrized(0.5 * (a * b + b * a)));
    }
  }
  for (int k = 0; k < 3; ++k) ops.push_back(t.L[k]);
  return ops;
}

std::vector<std::string> direct_operator_labels() {
  return {"1", "S11", "S12", "S13", "S22", "S23", "S33", "L1", "L2", "L3"};
}

RealVector moment_vector(const MomentMatrix& m) {
  RealVector b(10);
  b(0) = 1.0;
  int i = 1;
  for (int k = 0; k < 3; ++k)
    for (int l = k; l < 3; ++l) b(i++) = m(k, l).real();
  for (int k = 0; k < 3; ++k) b(i++) = m.first_moments()(k);
  return b;
}

Verdict exact_test_direct(const MomentMatrix& m, const SdpSettings& settings) {
  return phase1_verdict(direct_set(m), m.spin().dim(), settings, "exact");
}

Verdict exact_test_first_moments(const Vector3& l, SpinNumber j, const SdpSettings& settings) {
  return phase1_verdict(first_moment_set(l, j), j.dim(), settings, "exact-first-moments");
}

Verdict exact_test_extension(const SymmetricTwoQubitState& rho, SpinNumber j,
                             const SdpSettings& settings) {
  const int n = j.two_j();
  if (n < 2) throw std::invalid_argument("exact_test_extension: requires j >= 1");
  if (n > kMaxExtensionQubits) {
    throw CapacityExceeded("exact_test_extension: 2j = " + std::to_string(n) + " exceeds the cap of " +
                           std::to_string(kMaxExtensionQubits) +
                           " qubits; use exact_test_direct instead");
  }
  const ComplexMatrix v = symmetric_isometry(n).matrix;
  const ComplexMatrix& v2 = two_qubit_symmetric_basis();
  const Eigen::Index rest = Eigen::Index{1} << (n - 2);

  OperatorSet set;
  set.ops.push_back(HermitianMatrix::identity(j.dim()));
  set.values.push_back(1.0);
  set.labels.push_back("1");
  const auto basis = hermitian_basis(3);
  for (std::size_t p = 0; p < basis.size(); ++p) {
    const ComplexMatrix kt = (v2 * basis[p].matrix() * v2.adjoint()).transpose();
    // (K (x) 1) acting on each column of V: the first two qubits are the
    // slowest index, so a column reshapes to a (rest x 4) block.
    ComplexMatrix kv(v.rows(), v.cols());
    for (Eigen::Index q = 0; q < v.cols(); ++q) {
      Eigen::Map<const ComplexMatrix> block(v.col(q).data(), rest, 4);
      Eigen::Map<ComplexMatrix>(kv.col(q).data(), rest, 4) = block * kt;
    }
    set.ops.push_back(HermitianMatrix::symmetrized(v.adjoint() * kv));
    set.values.push_back(hs_inner(basis[p], rho.rho()));
    set.labels.push_back("B" + std::to_string(p));
  }
  return phase1_verdict(set, j.dim(), settings, "exact-extension");
}

bool inner_test(const HermitianMatrix& rho, double tol) {
  return is_psd(rho, tol) && ppt_min_eigenvalue(rho) >= -tol;
}

bool outer_test(const HermitianMatrix& rho, SpinNumber j, double tol) {
  return is_psd(rho, tol) && is_psd(tau(rho, j).tau, tol);
}

bool outer_test(const MomentMatrix& m, double tol) {
  return outer_test(reconstruct_rho(m).rho(), m.spin(), tol);
}

WitnessReport witness_search(const MomentMatrix& m, const SdpSettings& settings) {
  const OperatorSet set = direct_set(m);
  const Phase1Result res = run_phase1(set, m.spin().dim(), settings);
  WitnessReport report;
  report.optimal_value = res.witness_value;
  report.t_star = res.t_star;
  report.solver_status = res.solution.status;
  if (res.witness_value < -kBoundaryBand) report.witness = make_witness(res, set.labels);
  return report;
}

namespace {

class Pipeline {
 public:
  Pipeline(const MomentMatrix& m, const ClassifyOptions& options) : m_(m), options_(options) {}

  template <class F>
  auto annotated(const std::string& name, F&& f) {
    try {
      return f();
    } catch (const ConstraintViolation& e) {
      throw ConstraintViolation(e.constraint(), "in stage '" + name + "': " + e.what());
    } catch (const SolverFailure& e) {
      throw SolverFailure("in stage '" + name + "': " + e.what());
    }
  }

  Verdict run() {
    const SpinNumber j = m_.spin();
    if (j.two_j() == 1) {
      Verdict v = first_moment_test(m_.first_moments(), j);
      prepend(v);
      return v;
    }

    const double scale = std::max(1.0, j.casimir());
    const bool chi_ok = stage("chi", [&] {
      return is_psd(chi_matrix(m_).chi, options_.psd_tolerance * scale);
    });
    if (!chi_ok) return reject("chi");

    HermitianMatrix rho;
    const bool rho_ok = stage("reconstruct", [&] {
      rho = reconstruct_rho(m_).rho();
      return is_psd(rho, options_.psd_tolerance);
    });
    if (!rho_ok) return reject("reconstruct");

    std::optional<std::vector<ProductTerm>> terms;
    const bool inner_ok = stage("inner", [&] {
      if (!inner_test(rho, options_.psd_tolerance)) return false;
      terms = symmetric_separable_decomposition(clip_to_state(rho), 1e-7);
      return terms.has_value();
    });
    if (inner_ok) {
      Verdict v;
      v.status = VerdictStatus::quantum;
      v.stage = "inner";
      v.certificate = lift_product_terms(j, *terms);
      prepend(v);
      return v;
    }

    const bool outer_ok = stage("outer", [&] { return outer_test(rho, j, options_.psd_tolerance); });
    if (!outer_ok) return reject("outer");

    Verdict v = annotated("exact", [&] { return exact_test_direct(m_, options_.sdp); });
    prepend(v);
    return v;
  }

 private:
  bool stage(const std::string& name, const std::function<bool()>& f) {
    const auto t0 = Clock::now();
    const bool ok = annotated(name, f);
    records_.push_back({name, ok ? "pass" : "fail", seconds_since(t0)});
    return ok;
  }

  Verdict reject(const std::string& name) {
    Verdict v;
    v.stage = name;
    v.status = VerdictStatus::non_quantum;
    if (!options_.attach_witness) {
      prepend(v);
      return v;
    }
    const auto t0 = Clock::now();
    const WitnessReport w = annotated("witness", [&] { return witness_search(m_, options_.sdp); });
    v.t_star = w.t_star;
    if (w.witness) {
      records_.push_back({"witness", "found (value " + std::to_string(w.optimal_value) + ")",
                          seconds_since(t0)});
      v.certificate = *w.witness;
      prepend(v);
      return v;
    }
    // The SDP sees the point inside the boundary band; defer to it.
    records_.push_back({"witness", "none (t* = " + std::to_string(w.t_star) + ")", seconds_since(t0)});
    Verdict exact = annotated("exact", [&] { return exact_test_direct(m_, options_.sdp); });
    prepend(exact);
    return exact;
  }

  void prepend(Verdict& v) {
    records_.insert(records_.begin(), {"validate", "pass", 0.0});
    v.tests_run.insert(v.tests_run.begin(), records_.begin(), records_.end());
    records_.clear();
  }

  const MomentMatrix& m_;
  const ClassifyOptions& options_;
  std::vector<TestRecord> records_;
};

}  // namespace

Verdict classify(const MomentMatrix& m, const ClassifyOptions& options) {
  return Pipeline(m, options).run();
}

Verdict classify(SpinNumber j, const Matrix3c& m, const ClassifyOptions& options) {
  const auto t0 = Clock::now();
  std::optional<MomentMatrix> mm;
  try {
    mm = MomentMatrix::create(j, m);
  } catch (const ConstraintViolation& e) {
    throw ConstraintViolation(e.constraint(), std::string("in stage 'validate': ") + e.what());
  }
  Verdict v = classify(*mm, options);
  if (!v.tests_run.empty() && v.tests_run.front().name == "validate") {
    v.tests_run.front().seconds = seconds_since(t0);
  }
  return v;
}

}  // namespace spinmoment
