#include "risac/driver.hpp"

#include <chrono>
#include <cmath>

#include "json.hpp"
#include "risac/beamformer_qp.hpp"
#include "risac/linalg.hpp"
#include "risac/radar_filter.hpp"
#include "risac/reflection_solver.hpp"

namespace risac {

const char* method_name(Method m) {
  switch (m) {
    case Method::kProposed: return "proposed";
    case Method::kRandomRis: return "random-ris";
    case Method::kNoRis: return "no-ris";
  }
  return "unknown";
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kMaxIterations: return "max-iterations";
    case Termination::kInfeasible: return "infeasible";
    case Termination::kDegenerate: return "degenerate";
  }
  return "unknown";
}

bool parse_method(const std::string& text, Method& out) {
  if (text == "proposed") {
    out = Method::kProposed;
  } else if (text == "random-ris") {
    out = Method::kRandomRis;
  } else if (text == "no-ris") {
    out = Method::kNoRis;
  } else {
    return false;
  }
  return true;
}

std::string report_to_json(const SolveReport& report,
                           const SystemConfig& config, int indent) {
  nlohmann::json j;
  j["method"] = method_name(report.method);
  j["termination"] = termination_name(report.termination);
  j["iterations"] = report.iterations;
  j["initial_sum_rate"] = report.initial_sum_rate;
  j["sum_rate"] = report.sum_rate;
  j["radar_bound"] = report.radar_bound;
  j["radar_bound_db"] = report.radar_bound_db;
  j["message"] = report.message;
  j["trace"] = nlohmann::json::array();
  for (const TraceRecord& r : report.trace) {
    j["trace"].push_back({{"iteration", r.iteration},
                          {"sum_rate", r.sum_rate},
                          {"objective", r.objective},
                          {"radar_bound", r.radar_bound},
                          {"power_residual", r.power_residual},
                          {"inner_iterations", r.inner_iterations},
                          {"phi_accepted", r.phi_accepted},
                          {"seconds", r.seconds}});
  }
  j["metadata"] = {{"seed", config.seed},
                   {"tol_outer", config.tol_outer},
                   {"tol_inner", config.tol_inner},
                   {"tol_qp", config.tol_qp},
                   {"admm_penalty", config.admm_penalty},
                   {"initialization",
                    "phase-aligned cascade, channel-matched columns"}};
  return j.dump(indent);
}

void initialize(const ChannelSet& cs, const SystemConfig& config, CMat& W,
                CVec& phi) {
  const int m = cs.antennas;
  const int k = cs.users;
  const int cols = k + m;

  phi.resize(cs.ris_elements);
  for (int n = 0; n < cs.ris_elements; ++n) {
    const Complex casc = cs.bs_ris(n, 0) * cs.ris_target(n);
    const double a = std::abs(casc);
    phi(n) = a > 0.0 ? std::conj(casc) / a : Complex(1.0, 0.0);
  }

  W = CMat::Zero(m, cols);
  const double col_power = config.power_w / cols;
  for (int j = 0; j < k; ++j) {
    const CVec h = composite_user_channel(cs, phi, j);
    const double n2 = h.norm();
    if (n2 > 0.0) W.col(j) = std::sqrt(col_power) / n2 * h.conjugate();
  }
  const CVec vt = target_steering(cs, phi);
  const double vn = vt.norm();
  for (int j = k; j < cols; ++j) {
    if (vn > 0.0) W.col(j) = std::sqrt(col_power) / vn * vt.conjugate();
  }
  const double fro = W.norm();
  if (fro > 0.0) W *= std::sqrt(config.power_w) / fro;
}

namespace {

CMat user_gram_block(const ChannelSet& cs, const CVec& phi,
                     const AuxiliaryState& aux) {
  CMat H = CMat::Zero(cs.antennas, cs.antennas);
  for (int k = 0; k < cs.users; ++k) {
    const CVec h = composite_user_channel(cs, phi, k);
    H += std::norm(aux.scales(k)) * (h.conjugate() * h.transpose());
  }
  return H;
}

SolveReport run_blocks(const ChannelSet& cs, const SystemConfig& config,
                       Method method, const CVec* fixed_phi) {
  SolveReport rep;
  rep.method = method;
  const bool update_phi = method == Method::kProposed;
  const int cols = cs.users + cs.antennas;

  CMat W;
  CVec phi;
  initialize(cs, config, W, phi);
  if (fixed_phi) phi = *fixed_phi;
  if (W.norm() == 0.0) {
    rep.termination = Termination::kDegenerate;
    rep.message = "all channels are zero";
    rep.beamformer = W;
    rep.reflection = phi;
    return rep;
  }

  CVec u;
  double eps3 = 0.0;
  CVec v;
  try {
    u = update_receive_filter(cs, phi, W);
  } catch (const DegenerateTargetError& e) {
    rep.termination = Termination::kDegenerate;
    rep.message = e.what();
    rep.beamformer = W;
    rep.reflection = phi;
    return rep;
  }
  eps3 = min_filtered_response(u, config);
  v = radar_halfspace_normal(cs, phi, u);
  if (!feasibility_check(v, config.power_w, eps3)) {
    rep.termination = Termination::kInfeasible;
    rep.message = "radar floor unreachable within the power budget";
    rep.beamformer = W;
    rep.reflection = phi;
    return rep;
  }

  rep.initial_sum_rate = sum_rate(cs, phi, W, config.user_noise_w);
  double prev_rate = rep.initial_sum_rate;
  rep.termination = Termination::kMaxIterations;

  AuxiliaryState aux;
  for (int it = 1; it <= config.max_outer; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    TraceRecord rec;
    rec.iteration = it;

    const CMat composite = composite_user_channels(cs, phi);
    aux.ratios = optimal_ratios(composite, W, config.user_noise_w);
    aux.scales =
        optimal_scales(composite, W, aux.ratios, config.user_noise_w);

    if (it > 1) {
      // The filter for iteration 1 is already in place from the
      // feasibility check above.
      try {
        u = update_receive_filter(cs, phi, W);
      } catch (const DegenerateTargetError& e) {
        rep.termination = Termination::kDegenerate;
        rep.message = e.what();
        break;
      }
      eps3 = min_filtered_response(u, config);
      v = radar_halfspace_normal(cs, phi, u);
      if (std::sqrt(config.power_w) * v.norm() < eps3 * (1.0 - 1e-9)) {
        rep.termination = Termination::kInfeasible;
        rep.message = "radar floor lost mid-run";
        break;
      }
    }

    CompactForms cf =
        assemble_compact(cs, phi, W, aux, config.user_noise_w);
    const CMat H = user_gram_block(cs, phi, aux);
    const CVec warm = vec(W);
    QpSolution qp =
        solve_qp_replicated(H, cols, cf.w_linear, v, eps3, config.power_w,
                            config.tol_qp, &warm);
    if (!qp.converged) {
      rep.termination = Termination::kInfeasible;
      rep.message = "beamformer step failed: " + qp.message;
      break;
    }
    CVec w_flat = qp.w;
    W = unvec(w_flat, cs.antennas, cols);

    if (update_phi) {
      cf = assemble_compact(cs, phi, W, aux, config.user_noise_w);
      const SurrogateData sd = build_surrogate(cs, W, u, phi, eps3);
      const ReflectionResult rr = solve_reflection(cf, sd, phi, config);
      rec.inner_iterations = rr.iterations;
      if (rr.step_feasible) {
        const double bound_new =
            radar_snr_bound(cs, rr.phi, W, u, config);
        const double obj_old = reflection_objective(cf, phi);
        const double obj_new = reflection_objective(cf, rr.phi);
        if (bound_new >= config.radar_snr_min * (1.0 - 1e-9) &&
            obj_new <= obj_old + 1e-15 * std::max(1.0, std::abs(obj_old))) {
          phi = rr.phi;
          rec.phi_accepted = true;
        }
      }
    }

    rec.sum_rate = sum_rate(cs, phi, W, config.user_noise_w);
    rec.objective = transformed_objective(composite_user_channels(cs, phi), W,
                                          aux, config.user_noise_w);
    rec.radar_bound = radar_snr_bound(cs, phi, W, u, config);
    rec.power_residual = config.power_w - W.squaredNorm();
    rec.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    rep.trace.push_back(rec);
    rep.iterations = it;

    if (std::abs(rec.sum_rate - prev_rate) <= config.tol_outer) {
      rep.termination = Termination::kConverged;
      prev_rate = rec.sum_rate;
      break;
    }
    prev_rate = rec.sum_rate;
  }

  rep.sum_rate = prev_rate;
  if (!rep.trace.empty()) {
    rep.radar_bound = rep.trace.back().radar_bound;
    rep.radar_bound_db = linear_to_db(std::max(rep.radar_bound, 1e-300));
  }
  rep.beamformer = W;
  rep.reflection = phi;
  return rep;
}

}  // namespace

SolveReport solve(const ChannelSet& cs, const SystemConfig& config) {
  return run_blocks(cs, config, Method::kProposed, nullptr);
}

SolveReport solve_baseline(const ChannelSet& cs, const SystemConfig& config,
                           Method mode) {
  if (mode == Method::kRandomRis) {
    Rng rng = Rng::derive(config.seed, 1);
    CVec phi(cs.ris_elements);
    for (int n = 0; n < cs.ris_elements; ++n) phi(n) = rng.unit_phase();
    return solve_baseline(cs, config, mode, phi);
  }
  return solve_baseline(cs, config, mode, CVec());
}

SolveReport solve_baseline(const ChannelSet& cs, const SystemConfig& config,
                           Method mode, const CVec& fixed_phi) {
  if (mode == Method::kProposed) return solve(cs, config);
  if (mode == Method::kNoRis) {
    const ChannelSet bare = strip_ris(cs);
    const CVec ones = CVec::Ones(cs.ris_elements);
    return run_blocks(bare, config, mode, &ones);
  }
  return run_blocks(cs, config, mode, &fixed_phi);
}

}  // namespace risac
