#include "risac/reflection_solver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "risac/linalg.hpp"

namespace risac {

RVec realify(const CVec& phi) {
  const Eigen::Index n = phi.size();
  RVec x(2 * n);
  x.head(n) = phi.real();
  x.tail(n) = phi.imag();
  return x;
}

CVec complexify(const RVec& x) {
  const Eigen::Index n = x.size() / 2;
  return x.head(n) + Complex(0.0, 1.0) * x.tail(n);
}

CVec expand_target_response(const ChannelSet& cs, const CMat& W,
                            const CVec& phi) {
  const CVec& d = cs.bs_target;
  const CVec s = cs.bs_ris.transpose() * (phi.cwiseProduct(cs.ris_target));
  const Eigen::RowVectorXcd dW = d.transpose() * W;
  const Eigen::RowVectorXcd sW = s.transpose() * W;
  CMat direct = d * dW;
  CMat linear = s * dW + d * sW;
  CMat quad = s * sW;
  return vec(direct) + vec(linear) + vec(quad);
}

SurrogateData build_surrogate(const ChannelSet& cs, const CMat& W,
                              const CVec& u, const CVec& phi_hat, double eps3,
                              bool materialize_full) {
  SurrogateData sd;
  const int n = cs.ris_elements;
  const int m = cs.antennas;
  const int cols = static_cast<int>(W.cols());
  const CVec& d = cs.bs_target;
  // A maps phi to the reflected part of the target steering response.
  const CMat A = cs.bs_ris.transpose() * cs.ris_target.asDiagonal();

  const CVec r = W.transpose() * d;  // length cols
  const CMat WA = W.transpose() * A; // cols x n
  sd.F.resize(static_cast<Eigen::Index>(m) * cols, n);
  for (int j = 0; j < cols; ++j)
    sd.F.block(static_cast<Eigen::Index>(j) * m, 0, m, n) =
        r(j) * A + d * WA.row(j);
  if (materialize_full) sd.Lmat = kron(WA, A);

  const CMat U = unvec(u, m, cols);
  sd.Ltilde = A.transpose() * U.conjugate() * W.transpose() * A;

  sd.Lbar.resize(2 * n, 2 * n);
  sd.Lbar.topLeftCorner(n, n) = -sd.Ltilde.real();
  sd.Lbar.topRightCorner(n, n) = sd.Ltilde.imag();
  sd.Lbar.bottomLeftCorner(n, n) = sd.Ltilde.imag();
  sd.Lbar.bottomRightCorner(n, n) = sd.Ltilde.real();

  const RMat S = sd.Lbar + sd.Lbar.transpose();
  Eigen::SelfAdjointEigenSolver<RMat> es(S);
  sd.lambda_max = es.eigenvalues().maxCoeff();

  const RVec hat_bar = realify(phi_hat);
  const RVec z = S * hat_bar - sd.lambda_max * hat_bar;
  sd.u_tilde = complexify(z) - sd.F.adjoint() * u;

  Complex direct_resp = 0.0;
  for (int j = 0; j < cols; ++j) {
    const CVec uj = u.segment(static_cast<Eigen::Index>(j) * m, m);
    direct_resp += uj.dot(d) * tdot(d, CVec(W.col(j)));
  }
  sd.const_term = std::real(direct_resp);

  const double hat_quad = hat_bar.dot(sd.Lbar.transpose() * hat_bar);
  sd.eps4 = -eps3 + hat_quad + sd.const_term - sd.lambda_max * n;
  sd.phi_hat = phi_hat;
  return sd;
}

double embedded_quadratic(const SurrogateData& sd, const CVec& phi) {
  const RVec bar = realify(phi);
  return bar.dot(sd.Lbar.transpose() * bar);
}

double surrogate_value(const SurrogateData& sd, const CVec& phi) {
  const Eigen::Index n = sd.phi_hat.size();
  const RVec hat_bar = realify(sd.phi_hat);
  const RVec z =
      (sd.Lbar + sd.Lbar.transpose()) * hat_bar - sd.lambda_max * hat_bar;
  return z.dot(realify(phi)) - hat_bar.dot(sd.Lbar.transpose() * hat_bar) +
         sd.lambda_max * static_cast<double>(n);
}

double reflection_objective(const CompactForms& compact, const CVec& phi) {
  return std::real((phi.adjoint() * compact.phi_quad * phi).value()) -
         std::real(compact.phi_linear.dot(phi));
}

namespace {

void project_disks(CVec& phi) {
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double a = std::abs(phi(i));
    if (a > 1.0) phi(i) /= a;
  }
}

// Accelerated projected gradient for a strongly convex quadratic over the
// product of unit disks. The penalty term gives curvature at least rho/2, so
// fixed momentum for that modulus converges linearly; an alignment-based
// restart guards the cases where the estimate is loose.
int fista_disks(const CMat& D, double rho_half, const CVec& c, double eig_max,
                int max_iter, double tol, CVec& x) {
  project_disks(x);
  CVec y = x;
  const double lip = 2.0 * (eig_max + rho_half);
  const double step = 1.0 / lip;
  const double kappa = (eig_max + rho_half) / rho_half;
  const double rk = std::sqrt(kappa);
  const double beta = (rk - 1.0) / (rk + 1.0);
  int it = 0;
  for (; it < max_iter; ++it) {
    CVec grad = 2.0 * (D * y) + 2.0 * rho_half * y - c;
    CVec x_new = y - step * grad;
    project_disks(x_new);
    const double delta = (x_new - x).lpNorm<Eigen::Infinity>();
    if (std::real((y - x_new).dot(x_new - x)) > 0.0)
      y = x_new; // momentum restart
    else
      y = x_new + beta * (x_new - x);
    x = x_new;
    if (delta <= tol) {
      ++it;
      break;
    }
  }
  return it;
}

}  // namespace

PhiStepResult solve_phi_step(const CompactForms& compact,
                             const SurrogateData& sd, const AdmmState& state,
                             double tol_qp, SurrogateSense sense,
                             double quad_eig_max) {
  PhiStepResult res;
  const CMat& D = compact.phi_quad;
  const double rho_half = 0.5 * state.rho;
  if (quad_eig_max < 0.0) {
    Eigen::SelfAdjointEigenSolver<CMat> es(D);
    quad_eig_max = std::max(0.0, es.eigenvalues().maxCoeff());
  }
  const CVec b = compact.phi_linear + state.rho * state.varphi - state.mu;

  CVec normal = sd.u_tilde;
  double offset = sd.eps4;
  if (sense == SurrogateSense::kGe) {
    normal = -normal;
    offset = -offset;
  }

  const double l1 = normal.cwiseAbs().sum();
  if (offset < -l1 - 1e-12 * std::max(1.0, l1)) {
    res.feasible = false;
    res.phi = state.phi;
    return res;
  }

  const int max_iter = 20000;
  const double tol = 1e-13;
  auto solve_at = [&](double nu, CVec& x) {
    const CVec c = b - nu * normal;
    res.iterations += fista_disks(D, rho_half, c, quad_eig_max, max_iter, tol, x);
    return std::real(normal.dot(x)) - offset;
  };

  CVec x = state.phi;
  double gap = solve_at(0.0, x);
  const double slack = tol_qp * std::max(1.0, std::abs(offset));
  if (gap <= slack) {
    res.phi = x;
    return res;
  }

  double lo = 0.0, hi = std::max(1.0, b.norm() / std::max(l1, 1e-300));
  for (int it = 0; it < 300; ++it) {
    gap = solve_at(hi, x);
    if (gap <= 0.0) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e200) break;
  }
  if (gap > slack && hi > 1e200) {
    // Numerically the halfspace touches the disks in a single corner.
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x(i) = std::abs(normal(i)) > 0.0 ? -normal(i) / std::abs(normal(i))
                                       : state.phi(i);
    res.phi = x;
    res.dual = hi;
    return res;
  }
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    gap = solve_at(mid, x);
    if (gap <= 0.0)
      hi = mid;
    else
      lo = mid;
    if (std::abs(gap) <= 0.1 * slack) {
      hi = mid;
      break;
    }
  }
  gap = solve_at(hi, x);
  if (gap > slack) {
    // Land on the certified-feasible side of the bracket.
    CVec x_hi = x;
    solve_at(hi * (1.0 + 1e-9) + 1e-18, x_hi);
    x = x_hi;
  }
  res.phi = x;
  res.dual = hi;
  return res;
}

CVec update_varphi(const CVec& phi, const CVec& mu, double rho,
                   const CVec& prev_varphi) {
  CVec out(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const Complex z = rho * phi(i) + mu(i);
    out(i) = (z == Complex(0.0, 0.0)) ? prev_varphi(i) : z / std::abs(z);
  }
  return out;
}

void update_mu(AdmmState& state) {
  state.mu += state.rho * (state.phi - state.varphi);
}

ReflectionResult solve_reflection(const CompactForms& compact,
                                  const SurrogateData& sd,
                                  const CVec& phi_init,
                                  const SystemConfig& config,
                                  SurrogateSense sense) {
  ReflectionResult out;
  AdmmState st;
  st.phi = phi_init;
  st.varphi = phi_init;
  st.mu = CVec::Zero(phi_init.size());
  st.rho = config.admm_penalty;

  Eigen::SelfAdjointEigenSolver<CMat> es(compact.phi_quad);
  const double quad_eig_max = std::max(0.0, es.eigenvalues().maxCoeff());

  for (int it = 1; it <= config.max_inner; ++it) {
    PhiStepResult ps =
        solve_phi_step(compact, sd, st, config.tol_qp, sense, quad_eig_max);
    if (!ps.feasible) {
      out.phi = phi_init;
      out.iterations = it;
      out.step_feasible = false;
      return out;
    }
    st.phi = ps.phi;
    st.varphi = update_varphi(st.phi, st.mu, st.rho, st.varphi);
    update_mu(st);
    out.iterations = it;
    out.residual = (st.phi - st.varphi).lpNorm<Eigen::Infinity>();
    if (out.residual <= config.tol_inner) {
      out.converged = true;
      break;
    }
  }
  out.phi = st.varphi;
  return out;
}

}  // namespace risac
