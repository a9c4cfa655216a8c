#pragma once

#include <string>

#include "risac/channels.hpp"
#include "risac/fp_core.hpp"
#include "risac/scenario.hpp"
#include "risac/types.hpp"

namespace risac {

/// Which way the linearized radar constraint Re{u_tilde^H phi} vs eps4 is
/// enforced. The derivation gives <=; the opposite sense is kept selectable
/// for comparison runs only.
enum class SurrogateSense { kLe, kGe };

/// Linearization of the radar response around a unit-modulus expansion point:
/// response(phi) = direct + F*phi + quadratic(phi), with the quadratic
/// majorized by a constant-curvature bound so the constraint becomes a
/// halfspace in phi.
struct SurrogateData {
  CMat F;              // M(K+M) x N, linear-in-phi part of the response
  CMat Lmat;           // M(K+M) x N^2, only materialized on request
  CMat Ltilde;         // N x N, quadratic form after filtering with u
  RMat Lbar;           // 2N x 2N real embedding of Ltilde
  double lambda_max = 0.0; // max eigenvalue of Lbar + Lbar^T
  CVec u_tilde;        // halfspace normal in phi
  double eps4 = 0.0;   // halfspace offset
  double const_term = 0.0; // Re{u^H (I (x) h_dt h_dt^T) w}
  CVec phi_hat;        // expansion point
};

struct AdmmState {
  CVec phi;    // |entries| <= 1
  CVec varphi; // |entries| = 1
  CVec mu;     // dual
  double rho = 1.0;
};

struct PhiStepResult {
  CVec phi;
  bool feasible = true; // false when the surrogate halfspace misses the disks
  int iterations = 0;   // gradient steps across all dual evaluations
  double dual = 0.0;    // multiplier of the halfspace constraint
};

struct ReflectionResult {
  CVec phi; // unit modulus by construction
  int iterations = 0;
  double residual = 0.0; // final |phi - varphi|_inf
  bool converged = false;
  bool step_feasible = true;
};

RVec realify(const CVec& phi);
CVec complexify(const RVec& x);

/// Radar response split as direct + linear-in-phi + quadratic-in-phi terms;
/// equals vec(H_t(phi) W) identically.
CVec expand_target_response(const ChannelSet& cs, const CMat& W,
                            const CVec& phi);

SurrogateData build_surrogate(const ChannelSet& cs, const CMat& W,
                              const CVec& u, const CVec& phi_hat, double eps3,
                              bool materialize_full = false);

/// Upper bound on the embedded quadratic at phi; equals it at phi_hat.
double surrogate_value(const SurrogateData& sd, const CVec& phi);

/// The embedded quadratic realify(phi)^T Lbar^T realify(phi) itself,
/// which equals -Re{phi^T Ltilde phi}.
double embedded_quadratic(const SurrogateData& sd, const CVec& phi);

/// phi-block of the inner splitting: minimize
///   phi^H D phi - Re{g^H phi} + (rho/2)|phi - varphi + mu/rho|^2
/// over the halfspace and the per-element unit disks. Accelerated projected
/// gradient in phi with bisection on the halfspace multiplier.
/// quad_eig_max caches the top eigenvalue of D; pass a negative value to have
/// it computed here.
PhiStepResult solve_phi_step(const CompactForms& compact,
                             const SurrogateData& sd, const AdmmState& state,
                             double tol_qp,
                             SurrogateSense sense = SurrogateSense::kLe,
                             double quad_eig_max = -1.0);

/// Phase alignment; entries with rho*phi + mu == 0 keep their previous value.
CVec update_varphi(const CVec& phi, const CVec& mu, double rho,
                   const CVec& prev_varphi);

void update_mu(AdmmState& state);

/// Inner splitting loop; returns the unit-modulus iterate.
ReflectionResult solve_reflection(const CompactForms& compact,
                                  const SurrogateData& sd,
                                  const CVec& phi_init,
                                  const SystemConfig& config,
                                  SurrogateSense sense = SurrogateSense::kLe);

/// Objective the phi block minimizes, without the penalty term.
double reflection_objective(const CompactForms& compact, const CVec& phi);

}  // namespace risac
