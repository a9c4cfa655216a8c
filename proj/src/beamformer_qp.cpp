#include "risac/beamformer_qp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace risac {
namespace {

// Stationarity in the eigenbasis of the gram matrix reads
//   2 (eig_i + mu) w_i = a_i + lambda v_i,
// so the whole KKT system reduces to two scalar root-finds: mu for the power
// constraint, lambda for the halfspace. Both maps are monotone, which makes
// plain bisection exact enough and unconditionally stable.

struct Moments {
  double norm2 = 0.0;    // |w|^2 at (lambda, mu)
  double response = 0.0; // Re{v^H w}
  bool unbounded = false; // a zero-curvature direction carries nonzero linear force
};

Moments eval_moments(const RVec& eigs, const CVec& a, const CVec& v,
                     double lambda, double mu) {
  Moments m;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const Complex coef = a(i) + lambda * v(i);
    const double d = eigs(i) + mu;
    if (d <= 1e-300) {
      if (std::norm(coef) > 0.0) m.unbounded = true;
      continue;
    }
    const Complex wi = coef / (2.0 * d);
    m.norm2 += std::norm(wi);
    m.response += std::real(std::conj(v(i)) * wi);
  }
  return m;
}

struct InnerResult {
  double mu = 0.0;
  Moments m;
  int evals = 0;
};

// Smallest mu >= 0 with |w(lambda, mu)|^2 <= power; the norm is strictly
// decreasing in mu, so this is the power-constraint multiplier when the
// unconstrained norm overshoots.
InnerResult solve_mu(const RVec& eigs, const CVec& a, const CVec& v,
                     double lambda, double power) {
  InnerResult r;
  r.m = eval_moments(eigs, a, v, lambda, 0.0);
  r.evals = 1;
  if (!r.m.unbounded && r.m.norm2 <= power) return r;

  double coef_norm2 = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    coef_norm2 += std::norm(a(i) + lambda * v(i));
  double hi = std::sqrt(coef_norm2 / (4.0 * power)); // norm2(hi) <= power
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Moments mm = eval_moments(eigs, a, v, lambda, mid);
    ++r.evals;
    if (mm.unbounded || mm.norm2 > power)
      lo = mid;
    else
      hi = mid;
  }
  r.mu = hi;
  r.m = eval_moments(eigs, a, v, lambda, hi);
  ++r.evals;
  return r;
}

struct DiagResult {
  CVec w;
  double lambda = 0.0;
  double mu = 0.0;
  QpCase kkt_case = QpCase::kInterior;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

CVec assemble(const RVec& eigs, const CVec& a, const CVec& v, double lambda,
              double mu) {
  CVec w = CVec::Zero(eigs.size());
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const double d = eigs(i) + mu;
    if (d <= 1e-300) continue;
    w(i) = (a(i) + lambda * v(i)) / (2.0 * d);
  }
  return w;
}

DiagResult diag_qp_solve(const RVec& eigs, const CVec& a, const CVec& v,
                         double offset, double power) {
  DiagResult out;
  const double a_norm = a.norm();
  const double v_norm = v.norm();
  const double eig_max = eigs.size() ? eigs.maxCoeff() : 0.0;
  const double cap = std::sqrt(power) * v_norm;

  if (eig_max <= 1e-30 && a_norm <= 1e-30) {
    // Constant objective: return the minimum-norm feasible point.
    if (offset <= 0.0) {
      out.w = CVec::Zero(eigs.size());
    } else if (v_norm == 0.0 || cap < offset) {
      out.kkt_case = QpCase::kInfeasible;
      out.message = "constraint set empty for constant objective";
      out.w = CVec::Zero(eigs.size());
      return out;
    } else {
      out.w = (offset / (v_norm * v_norm)) * v;
    }
    out.kkt_case = QpCase::kDegenerateMinNorm;
    out.converged = true;
    return out;
  }

  if (cap < offset * (1.0 - 1e-9)) {
    out.kkt_case = QpCase::kInfeasible;
    out.message = "halfspace unreachable within the power ball";
    out.w = CVec::Zero(eigs.size());
    return out;
  }
  if (v_norm > 0.0 && offset >= cap * (1.0 - 1e-9)) {
    // Feasible set collapses to (a neighborhood of) one boundary ray.
    out.w = (std::sqrt(power) / v_norm) * v;
    out.kkt_case = QpCase::kBoth;
    out.converged = true;
    out.message = "boundary ray";
    return out;
  }

  InnerResult base = solve_mu(eigs, a, v, 0.0, power);
  out.iterations += base.evals;
  if (base.m.response >= offset) {
    out.lambda = 0.0;
    out.mu = base.mu;
    out.w = assemble(eigs, a, v, 0.0, base.mu);
    out.kkt_case = base.mu > 0.0 ? QpCase::kPower : QpCase::kInterior;
    out.converged = true;
    return out;
  }

  // Halfspace active: Re{v^H w(lambda, mu(lambda))} is nondecreasing in
  // lambda and tends to sqrt(power)|v| > offset, so a bracket exists.
  double lo = 0.0;
  double hi = std::max(1.0, a_norm / std::max(v_norm, 1e-300));
  bool bracketed = false;
  for (int it = 0; it < 500; ++it) {
    InnerResult r = solve_mu(eigs, a, v, hi, power);
    out.iterations += r.evals;
    if (r.m.response >= offset) {
      bracketed = true;
      break;
    }
    lo = hi;
    hi *= 2.0;
    if (hi > 1e250) break;
  }
  if (!bracketed) {
    // Response saturates below offset within floating point: the optimum is
    // indistinguishable from the boundary ray.
    out.w = (std::sqrt(power) / v_norm) * v;
    out.kkt_case = QpCase::kBoth;
    out.converged = true;
    out.message = "response saturated; boundary ray";
    return out;
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    InnerResult r = solve_mu(eigs, a, v, mid, power);
    out.iterations += r.evals;
    if (r.m.response >= offset)
      hi = mid;
    else
      lo = mid;
  }
  InnerResult fin = solve_mu(eigs, a, v, hi, power);
  out.iterations += fin.evals;
  out.lambda = hi;
  out.mu = fin.mu;
  out.w = assemble(eigs, a, v, hi, fin.mu);
  out.kkt_case = fin.mu > 0.0 ? QpCase::kBoth : QpCase::kHalfspace;
  out.converged = true;
  return out;
}

struct EigenBasis {
  // w = rotate(w_tilde); columns of blocks are the per-block eigenvectors.
  RVec eigs;
  CVec a_t;
  CVec v_t;
};

QpSolution finish(const DiagResult& d, const CVec& w_full, const CMat& gram_block,
                  int copies, const CVec& a, const CVec& v, double offset,
                  double power, double tol_qp, const CVec* warm) {
  QpSolution sol;
  sol.kkt_case = d.kkt_case;
  sol.lambda = d.lambda;
  sol.mu = d.mu;
  sol.iterations = d.iterations;
  sol.converged = d.converged;
  sol.message = d.message;
  sol.w = w_full;

  auto objective_of = [&](const CVec& w) {
    const int m = static_cast<int>(gram_block.rows());
    double quad = 0.0;
    for (int j = 0; j < copies; ++j) {
      const auto wj = w.segment(static_cast<Eigen::Index>(j) * m, m);
      quad += std::real((wj.adjoint() * gram_block * wj).value());
    }
    return quad - std::real(a.dot(w));
  };

  sol.objective = objective_of(sol.w);
  sol.halfspace_residual = std::real(v.dot(sol.w)) - offset;
  sol.power_residual = power - sol.w.squaredNorm();

  if (warm && warm->size() == sol.w.size()) {
    const double warm_resp = std::real(v.dot(*warm)) - offset;
    const double warm_pow = power - warm->squaredNorm();
    if (warm_resp >= -tol_qp && warm_pow >= -tol_qp) {
      const double warm_obj = objective_of(*warm);
      if (!sol.converged || warm_obj < sol.objective) {
        sol.w = *warm;
        sol.objective = warm_obj;
        sol.halfspace_residual = warm_resp;
        sol.power_residual = warm_pow;
        sol.kkt_case = QpCase::kWarmFallback;
        sol.converged = true;
        sol.message = "previous iterate retained";
      }
    }
  }
  return sol;
}

}  // namespace

const char* qp_case_name(QpCase c) {
  switch (c) {
    case QpCase::kInterior: return "interior";
    case QpCase::kPower: return "power";
    case QpCase::kHalfspace: return "halfspace";
    case QpCase::kBoth: return "both";
    case QpCase::kDegenerateMinNorm: return "degenerate-min-norm";
    case QpCase::kWarmFallback: return "warm-fallback";
    case QpCase::kInfeasible: return "infeasible";
  }
  return "unknown";
}

double qp_objective(const CMat& gram, const CVec& a, const CVec& w) {
  return std::real((w.adjoint() * gram * w).value()) - std::real(a.dot(w));
}

QpSolution solve_qp(const QpProblem& problem, double tol_qp, const CVec* warm) {
  const CMat& G = problem.gram;
  const double herm = (G - G.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10)
    throw std::invalid_argument("gram matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(G);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("gram eigendecomposition failed");
  RVec eigs = es.eigenvalues();
  if (eigs.minCoeff() < -1e-9)
    throw std::invalid_argument("gram matrix is not positive semidefinite");
  eigs = eigs.cwiseMax(0.0);

  const CMat& Q = es.eigenvectors();
  const CVec a_t = Q.adjoint() * problem.linear;
  const CVec v_t = Q.adjoint() * problem.halfspace_normal;
  DiagResult d =
      diag_qp_solve(eigs, a_t, v_t, problem.halfspace_offset, problem.power);
  const CVec w_full = Q * d.w;
  return finish(d, w_full, G, 1, problem.linear, problem.halfspace_normal,
                problem.halfspace_offset, problem.power, tol_qp, warm);
}

QpSolution solve_qp_replicated(const CMat& block, int copies, const CVec& a,
                               const CVec& v, double offset, double power,
                               double tol_qp, const CVec* warm) {
  const int m = static_cast<int>(block.rows());
  const double herm = (block - block.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10)
    throw std::invalid_argument("gram block is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(block);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("gram eigendecomposition failed");
  RVec block_eigs = es.eigenvalues();
  if (block_eigs.minCoeff() < -1e-9)
    throw std::invalid_argument("gram block is not positive semidefinite");
  block_eigs = block_eigs.cwiseMax(0.0);
  const CMat& Q = es.eigenvectors();

  const Eigen::Index n = static_cast<Eigen::Index>(m) * copies;
  RVec eigs(n);
  CVec a_t(n), v_t(n);
  for (int j = 0; j < copies; ++j) {
    const Eigen::Index off = static_cast<Eigen::Index>(j) * m;
    eigs.segment(off, m) = block_eigs;
    a_t.segment(off, m) = Q.adjoint() * a.segment(off, m);
    v_t.segment(off, m) = Q.adjoint() * v.segment(off, m);
  }
  DiagResult d = diag_qp_solve(eigs, a_t, v_t, offset, power);
  CVec w_full(n);
  for (int j = 0; j < copies; ++j) {
    const Eigen::Index off = static_cast<Eigen::Index>(j) * m;
    w_full.segment(off, m) = Q * d.w.segment(off, m);
  }
  return finish(d, w_full, block, copies, a, v, offset, power, tol_qp, warm);
}

}  // namespace risac
