#include "spinmoment/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spinmoment {

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::primal_infeasible: return "primal-infeasible-certificate";
    case SdpStatus::dual_infeasible: return "dual-infeasible-certificate";
    case SdpStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

OrthonormalBasis orthonormalize(std::span<const HermitianMatrix> ops, std::span<const double> values,
                                double rank_tolerance, double consistency_tolerance) {
  if (ops.size() != values.size()) {
    throw std::invalid_argument("orthonormalize: operator and value counts differ");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(ops.size());
  OrthonormalBasis out;
  std::vector<ComplexMatrix> basis;
  std::vector<RealVector> rows;
  std::vector<double> vals;

  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& a = ops[static_cast<std::size_t>(i)];
    if (i > 0 && a.dim() != ops[0].dim()) {
      throw std::invalid_argument("orthonormalize: operators have mixed dimensions");
    }
    ComplexMatrix w = a.matrix();
    RealVector coef = RealVector::Zero(m);
    coef(i) = 1.0;
    double val = values[static_cast<std::size_t>(i)];
    const double input_norm = w.norm();
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const double r = hs_inner(basis[k], w);
        w -= r * basis[k];
        coef -= r * rows[k];
        val -= r * vals[k];
      }
    }
    const double norm = w.norm();
    if (norm <= rank_tolerance * std::max(1.0, input_norm)) {
      const double bound = consistency_tolerance * (1.0 + std::abs(values[static_cast<std::size_t>(i)]));
      if (std::abs(val) > bound) {
        throw InconsistentConstraints("constraint " + std::to_string(i) +
                                          " is a linear combination of earlier ones but its value "
                                          "differs by " + std::to_string(val),
                                      coef / val);
      }
      out.dropped.push_back(static_cast<std::size_t>(i));
      continue;
    }
    basis.push_back(w / norm);
    rows.push_back(coef / norm);
    vals.push_back(val / norm);
  }

  const Eigen::Index rank = static_cast<Eigen::Index>(basis.size());
  out.transform = RealMatrix::Zero(rank, m);
  out.values = RealVector::Zero(rank);
  out.ops.reserve(basis.size());
  for (Eigen::Index k = 0; k < rank; ++k) {
    out.ops.push_back(HermitianMatrix::symmetrized(basis[static_cast<std::size_t>(k)]));
    out.transform.row(k) = rows[static_cast<std::size_t>(k)].transpose();
    out.values(k) = vals[static_cast<std::size_t>(k)];
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ComplexMatrix herm(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

// Largest alpha with X + alpha dX >= 0 (X > 0); +inf if unbounded.
double max_step(const Eigen::LLT<ComplexMatrix>& chol_x, const ComplexMatrix& dx) {
  const auto l = chol_x.matrixL();
  ComplexMatrix t = l.solve(dx);
  t = l.solve(t.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm(t), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : kInf;
}

struct Workspace {
  const std::vector<ComplexMatrix>& ops;
  const RealVector& b;
  const ComplexMatrix& c;
  Eigen::Index n;

  RealVector apply(const ComplexMatrix& x) const {
    RealVector out(static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) out(static_cast<Eigen::Index>(i)) = hs_inner(ops[i], x);
    return out;
  }
  ComplexMatrix adjoint(const RealVector& y) const {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < ops.size(); ++i) out += y(static_cast<Eigen::Index>(i)) * ops[i];
    return out;
  }
};

struct Direction {
  ComplexMatrix dx, dz;
  RealVector dy;
};

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpSettings& settings,
                  const std::optional<StartingPoint>& start) {
  const Eigen::Index n = problem.dim;
  if (n < 1) throw std::invalid_argument("sdp::solve: dimension must be positive");
  if (n > settings.max_dim) {
    throw CapacityExceeded("sdp::solve: dimension " + std::to_string(n) + " exceeds cap " +
                           std::to_string(settings.max_dim));
  }
  if (problem.objective.dim() != n) {
    throw std::invalid_argument("sdp::solve: objective dimension mismatch");
  }
  std::vector<HermitianMatrix> input_ops;
  std::vector<double> input_vals;
  for (const auto& con : problem.constraints) {
    if (con.op.dim() != n) throw std::invalid_argument("sdp::solve: constraint dimension mismatch");
    input_ops.push_back(con.op);
    input_vals.push_back(con.value);
  }
  const Eigen::Index m_in = static_cast<Eigen::Index>(input_ops.size());

  SdpSolution sol;
  OrthonormalBasis basis;
  try {
    basis = orthonormalize(input_ops, input_vals, settings.rank_tolerance,
                           settings.consistency_tolerance);
  } catch (const InconsistentConstraints& e) {
    sol.status = SdpStatus::primal_infeasible;
    sol.y = e.certificate();
    sol.message = e.what();
    return sol;
  }

  std::vector<ComplexMatrix> ops;
  for (const auto& s : basis.ops) ops.push_back(s.matrix());
  const RealVector& b = basis.values;
  const ComplexMatrix& c = problem.objective.matrix();
  const Eigen::Index m = static_cast<Eigen::Index>(ops.size());
  Workspace ws{ops, b, c, n};

  ComplexMatrix x = start ? start->x.matrix() : ComplexMatrix::Identity(n, n);
  ComplexMatrix z = start ? start->z.matrix() : ComplexMatrix::Identity(n, n);
  RealVector y = RealVector::Zero(m);

  const double b_norm = b.norm();
  const double c_norm = c.norm();
  const double tol = settings.tolerance;

  auto finish = [&](SdpStatus status, std::string message) {
    sol.status = status;
    sol.message = std::move(message);
    sol.x = HermitianMatrix::symmetrized(x);
    sol.z = HermitianMatrix::symmetrized(z);
    sol.y = basis.transform.transpose() * y;
    sol.primal_objective = hs_inner(c, x);
    sol.dual_objective = b.dot(y);
    sol.gap = sol.primal_objective - sol.dual_objective;
    double pres = 0.0;
    for (Eigen::Index i = 0; i < m_in; ++i) {
      pres = std::max(pres, std::abs(hs_inner(input_ops[static_cast<std::size_t>(i)].matrix(), x) -
                                     input_vals[static_cast<std::size_t>(i)]));
    }
    sol.primal_residual = pres;
    ComplexMatrix rd = c - z;
    for (Eigen::Index i = 0; i < m_in; ++i) rd -= sol.y(i) * input_ops[static_cast<std::size_t>(i)].matrix();
    sol.dual_residual = max_abs(rd);
    return sol;
  };

  for (int it = 0; it <= settings.max_iterations; ++it) {
    sol.iterations = it;
    const RealVector rp = b - ws.apply(x);
    const ComplexMatrix rd = c - z - ws.adjoint(y);
    const double pobj = hs_inner(c, x);
    const double dobj = b.dot(y);
    const double mu = hs_inner(x, z) / static_cast<double>(n);
    const double pres = rp.norm();
    const double dres = rd.norm();
    if (settings.record_history) sol.history.push_back({it, pobj, dobj, pres, dres, mu});

    const bool primal_ok = pres <= tol * (1.0 + b_norm);
    const bool dual_ok = dres <= tol * (1.0 + c_norm);
    const bool gap_ok = std::abs(pobj - dobj) <= tol * (1.0 + std::abs(pobj)) &&
                        mu * static_cast<double>(n) <= tol * (1.0 + std::abs(pobj));
    if (primal_ok && dual_ok && gap_ok) return finish(SdpStatus::optimal, "converged");

    // Farkas certificates.
    if (dobj > 0.0 && m > 0) {
      const RealVector yhat = y / dobj;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm(ws.adjoint(yhat)), Eigen::EigenvaluesOnly);
      if (eig.eigenvalues()(n - 1) <= settings.certificate_tolerance && dobj > 1.0 / tol) {
        y = yhat;
        return finish(SdpStatus::primal_infeasible, "primal infeasible: Farkas certificate in y");
      }
    }
    if (pobj < 0.0) {
      const ComplexMatrix xhat = x / (-pobj);
      if (ws.apply(xhat).norm() <= settings.certificate_tolerance && -pobj > 1.0 / tol) {
        x = xhat;
        return finish(SdpStatus::dual_infeasible, "dual infeasible: improving ray in X");
      }
    }
    if (it == settings.max_iterations) break;

    Eigen::LLT<ComplexMatrix> chol_x(x);
    Eigen::LLT<ComplexMatrix> chol_z(z);
    if (chol_x.info() != Eigen::Success || chol_z.info() != Eigen::Success) {
      return finish(SdpStatus::numerical_failure, "iterate left the interior of the cone");
    }
    const ComplexMatrix z_inv = chol_z.solve(ComplexMatrix::Identity(n, n));

    // Schur complement M_ij = Re tr(S_i X S_j Z^{-1}).
    RealMatrix schur(m, m);
    std::vector<ComplexMatrix> g(static_cast<std::size_t>(m));
    for (Eigen::Index jj = 0; jj < m; ++jj) g[static_cast<std::size_t>(jj)] = x * ops[static_cast<std::size_t>(jj)] * z_inv;
    for (Eigen::Index ii = 0; ii < m; ++ii)
      for (Eigen::Index jj = 0; jj <= ii; ++jj) {
        const double v = hs_inner(ops[static_cast<std::size_t>(ii)], g[static_cast<std::size_t>(jj)]);
        schur(ii, jj) = v;
        schur(jj, ii) = v;
      }
    // The Schur complement is positive definite in exact arithmetic but
    // loses definiteness to rounding close to a degenerate optimum.
    Eigen::LLT<RealMatrix> schur_llt(schur);
    const bool schur_pd = schur_llt.info() == Eigen::Success;
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> schur_cod;
    if (!schur_pd) schur_cod.compute(schur);
    auto schur_solve = [&](const RealVector& rhs) -> RealVector {
      return schur_pd ? RealVector(schur_llt.solve(rhs)) : RealVector(schur_cod.solve(rhs));
    };

    const ComplexMatrix x_rd_zinv = x * rd * z_inv;
    auto direction = [&](const ComplexMatrix& k) {
      Direction d;
      const RealVector rhs = rp - ws.apply(k - x_rd_zinv);
      d.dy = m > 0 ? schur_solve(rhs) : RealVector();
      d.dz = herm(rd - ws.adjoint(d.dy));
      d.dx = herm(k - x * d.dz * z_inv);
      return d;
    };
    auto step_lengths = [&](const Direction& d) {
      const double ap = std::min(1.0, settings.step_fraction * max_step(chol_x, d.dx));
      const double ad = std::min(1.0, settings.step_fraction * max_step(chol_z, d.dz));
      return std::pair{ap, ad};
    };

    // Predictor (affine scaling).
    const Direction aff = direction(-x);
    const auto [ap_aff, ad_aff] = step_lengths(aff);
    const double mu_aff = hs_inner(x + ap_aff * aff.dx, z + ad_aff * aff.dz) / static_cast<double>(n);
    double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff) / mu, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    const ComplexMatrix k = sigma * mu * z_inv - x - aff.dx * aff.dz * z_inv;
    const Direction d = direction(k);
    if (!d.dx.allFinite() || !d.dz.allFinite() || !d.dy.allFinite()) {
      return finish(SdpStatus::numerical_failure, "search direction is not finite");
    }
    const auto [ap, ad] = step_lengths(d);
    if (std::max(ap, ad) < 1e-14) {
      return finish(SdpStatus::numerical_failure, "step length collapsed");
    }
    x = herm(x + ap * d.dx);
    z = herm(z + ad * d.dz);
    y += ad * d.dy;
  }
  return finish(SdpStatus::numerical_failure,
                "no convergence within " + std::to_string(settings.max_iterations) + " iterations");
}

Phase1Result phase1_min_t(std::span<const LinearConstraint> constraints, Eigen::Index dim,
                          const SdpSettings& settings) {
  if (dim < 1) throw std::invalid_argument("phase1_min_t: dimension must be positive");
  std::vector<HermitianMatrix> ops{HermitianMatrix::identity(dim)};
  std::vector<double> vals{1.0};
  for (const auto& con : constraints) {
    if (con.op.dim() != dim) throw std::invalid_argument("phase1_min_t: constraint dimension mismatch");
    ops.push_back(con.op);
    vals.push_back(con.value);
  }
  Phase1Result res;
  res.basis = orthonormalize(ops, vals, settings.rank_tolerance, settings.consistency_tolerance);
  const double n = static_cast<double>(dim);

  SdpProblem w_problem;
  w_problem.dim = dim;
  w_problem.objective = HermitianMatrix::identity(dim) * (1.0 / n);
  ComplexMatrix fixed = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < res.basis.ops.size(); ++k) {
    const double v = res.basis.values(static_cast<Eigen::Index>(k));
    fixed += v * res.basis.ops[k].matrix();
    if (k > 0) w_problem.constraints.push_back({res.basis.ops[k], v});
  }
  // Strictly feasible start on both sides: W = X_fix + c 1, Z = 1/n.
  const HermitianMatrix x_fix = HermitianMatrix::symmetrized(fixed);
  const double shift = std::max(0.0, -min_eigenvalue(x_fix)) + 1.0 / n;
  StartingPoint start{x_fix + HermitianMatrix::identity(dim) * shift,
                      HermitianMatrix::identity(dim) * (1.0 / n)};

  res.solution = solve(w_problem, settings, start);
  res.t_star = res.solution.primal_objective - 1.0 / n;
  res.x = res.solution.x - HermitianMatrix::identity(dim) * res.t_star;
  // Project the dual slack onto the span so Z is exactly sum z_k S_k.
  const Eigen::Index rank = static_cast<Eigen::Index>(res.basis.ops.size());
  res.witness_coefficients.resize(rank);
  ComplexMatrix z = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const auto& s = res.basis.ops[static_cast<std::size_t>(k)];
    res.witness_coefficients(k) = hs_inner(s, res.solution.z);
    z += res.witness_coefficients(k) * s.matrix();
  }
  res.witness = HermitianMatrix::symmetrized(z);
  res.witness_value = res.witness_coefficients.dot(res.basis.values);
  return res;
}

}  // namespace spinmoment
