#pragma once

#include "risac/beamformer_qp.hpp"
#include "risac/fp_core.hpp"
#include "risac/types.hpp"

namespace risac {

/// Slow, independent reference solvers used to cross-check the production
/// paths. Projected gradient with alternating (Dykstra) projections; nothing
/// here shares code with the solvers under test.

/// Dykstra projection onto {|x| <= radius} and {Re{v^H x} >= offset}.
CVec project_ball_halfspace(const CVec& x, const CVec& v, double offset,
                            double radius, int max_cycles = 400);

/// Dykstra projection onto the per-element unit disks and
/// {Re{n^H x} <= offset}.
CVec project_disks_halfspace(const CVec& x, const CVec& normal, double offset,
                             int max_cycles = 400);

struct PgResult {
  CVec x;
  double objective = 0.0;
  int iterations = 0;
};

/// Reference for the beamformer subproblem.
PgResult pg_reference_qp(const QpProblem& problem, int iterations = 100000);

/// Reference for the reflection block: minimize x^H quad x - Re{linear^H x}
/// over disks intersected with {Re{normal^H x} <= offset}.
PgResult pg_reference_phi_step(const CMat& quad, const CVec& linear,
                               const CVec& normal, double offset,
                               int iterations = 100000);

struct GridResult {
  CVec phi;
  double objective = 0.0;
  bool found = false; // false when no grid point satisfies the halfspace
};

/// Exhaustive unit-modulus search for two elements: steps^2 phase pairs,
/// keeping the feasible minimum of the reflection objective.
GridResult grid_reference_phases(const CompactForms& compact,
                                 const CVec& normal, double offset,
                                 int steps = 360);

}  // namespace risac
