#include "risac/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace risac {
namespace {

CVec onto_ball(const CVec& x, double radius) {
  const double n = x.norm();
  return n > radius ? CVec(radius / n * x) : x;
}

CVec onto_halfspace_ge(const CVec& x, const CVec& v, double offset) {
  const double vn2 = v.squaredNorm();
  if (vn2 <= 0.0) return x;
  const double gap = offset - std::real(v.dot(x));
  return gap > 0.0 ? CVec(x + (gap / vn2) * v) : x;
}

CVec onto_halfspace_le(const CVec& x, const CVec& n, double offset) {
  const double nn2 = n.squaredNorm();
  if (nn2 <= 0.0) return x;
  const double gap = std::real(n.dot(x)) - offset;
  return gap > 0.0 ? CVec(x - (gap / nn2) * n) : x;
}

CVec onto_disks(const CVec& x) {
  CVec y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i));
    if (a > 1.0) y(i) /= a;
  }
  return y;
}

template <typename ProjA, typename ProjB>
CVec dykstra(const CVec& x0, ProjA&& pa, ProjB&& pb, int max_cycles) {
  CVec x = x0;
  CVec p = CVec::Zero(x.size());
  CVec q = CVec::Zero(x.size());
  for (int it = 0; it < max_cycles; ++it) {
    const CVec prev = x;
    CVec y = pa(x + p);
    p = x + p - y;
    x = pb(y + q);
    q = y + q - x;
    if ((x - prev).lpNorm<Eigen::Infinity>() <=
        1e-15 * (1.0 + x.lpNorm<Eigen::Infinity>()))
      break;
  }
  return x;
}

}  // namespace

CVec project_ball_halfspace(const CVec& x, const CVec& v, double offset,
                            double radius, int max_cycles) {
  return dykstra(
      x, [&](const CVec& z) { return onto_ball(z, radius); },
      [&](const CVec& z) { return onto_halfspace_ge(z, v, offset); },
      max_cycles);
}

CVec project_disks_halfspace(const CVec& x, const CVec& normal, double offset,
                             int max_cycles) {
  return dykstra(
      x, [&](const CVec& z) { return onto_disks(z); },
      [&](const CVec& z) { return onto_halfspace_le(z, normal, offset); },
      max_cycles);
}

namespace {

template <typename Projection>
PgResult pg_minimize(const CMat& quad, const CVec& linear,
                     Projection&& project, int iterations) {
  Eigen::SelfAdjointEigenSolver<CMat> es(quad);
  const double lip =
      2.0 * std::max(es.eigenvalues().maxCoeff(), 0.0) +
      1e-9 * (1.0 + linear.norm());
  const double step = 1.0 / lip;

  auto objective = [&](const CVec& x) {
    return std::real((x.adjoint() * quad * x).value()) -
           std::real(linear.dot(x));
  };

  PgResult res;
  CVec x = project(CVec::Zero(linear.size()));
  res.x = x;
  res.objective = objective(x);
  for (int it = 0; it < iterations; ++it) {
    const CVec grad = 2.0 * (quad * x) - linear;
    CVec x_new = project(x - step * grad);
    const double delta = (x_new - x).lpNorm<Eigen::Infinity>();
    x = x_new;
    res.iterations = it + 1;
    const double obj = objective(x);
    if (obj < res.objective) {
      res.objective = obj;
      res.x = x;
    }
    if (delta <= 1e-16) break;
  }
  return res;
}

}  // namespace

PgResult pg_reference_qp(const QpProblem& problem, int iterations) {
  const double radius = std::sqrt(problem.power);
  return pg_minimize(
      problem.gram, problem.linear,
      [&](const CVec& z) {
        return project_ball_halfspace(z, problem.halfspace_normal,
                                      problem.halfspace_offset, radius);
      },
      iterations);
}

PgResult pg_reference_phi_step(const CMat& quad, const CVec& linear,
                               const CVec& normal, double offset,
                               int iterations) {
  return pg_minimize(
      quad, linear,
      [&](const CVec& z) {
        return project_disks_halfspace(z, normal, offset);
      },
      iterations);
}

GridResult grid_reference_phases(const CompactForms& compact,
                                 const CVec& normal, double offset,
                                 int steps) {
  GridResult best;
  CVec phi(2);
  for (int i = 0; i < steps; ++i) {
    const double t1 = 2.0 * kPi * i / steps;
    phi(0) = Complex(std::cos(t1), std::sin(t1));
    for (int j = 0; j < steps; ++j) {
      const double t2 = 2.0 * kPi * j / steps;
      phi(1) = Complex(std::cos(t2), std::sin(t2));
      if (normal.size() == 2 &&
          std::real(normal.dot(phi)) > offset + 1e-12)
        continue;
      const double obj =
          std::real((phi.adjoint() * compact.phi_quad * phi).value()) -
          std::real(compact.phi_linear.dot(phi));
      if (!best.found || obj < best.objective) {
        best.found = true;
        best.objective = obj;
        best.phi = phi;
      }
    }
  }
  return best;
}

}  // namespace risac
