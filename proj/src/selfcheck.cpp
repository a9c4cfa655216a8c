#include "risac/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "risac/driver.hpp"
#include "risac/linalg.hpp"
#include "risac/oracles.hpp"
#include "risac/radar_filter.hpp"
#include "risac/reflection_solver.hpp"
#include "risac/sweep.hpp"

namespace risac {
namespace {

CVec random_cvec(Rng& rng, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.std_complex_normal();
  return v;
}

CMat random_cmat(Rng& rng, int r, int c) {
  CMat m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = rng.std_complex_normal();
  return m;
}

CVec random_phases(Rng& rng, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.unit_phase();
  return v;
}

/// Unit-scale synthetic links, no path loss; used where absolute tolerances
/// are quoted.
ChannelSet synthetic_channels(Rng& rng, int m, int k, int n) {
  ChannelSet cs;
  cs.antennas = m;
  cs.users = k;
  cs.ris_elements = n;
  for (int i = 0; i < k; ++i) {
    cs.bs_user.push_back(random_cvec(rng, m));
    cs.ris_user.push_back(random_cvec(rng, n));
    cs.bs_user_distance_m.push_back(1.0);
  }
  cs.bs_ris = random_cmat(rng, n, m);
  cs.bs_target = random_cvec(rng, m);
  cs.ris_target = random_cvec(rng, n);
  cs.bs_target_distance_m = 1.0;
  return cs;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

CheckResult check_expansion() {
  CheckResult r{"response-expansion", true, ""};
  Rng rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ChannelSet cs = synthetic_channels(rng, 2, 1, 2);
    const CMat W = random_cmat(rng, 2, 3);
    const CVec phi = random_phases(rng, 2);
    const CVec lhs = expand_target_response(cs, W, phi);
    const CMat Ht = target_channel(cs, phi);
    CMat HW = Ht * W;
    const CVec rhs = vec(HW);
    worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  r.passed = worst <= 1e-10;
  r.detail = "max deviation " + fmt(worst);
  return r;
}

CheckResult check_tightness() {
  CheckResult r{"transform-tightness", true, ""};
  Rng rng(12);
  double worst = 0.0;
  const std::vector<double> noise{0.5, 0.8};
  for (int trial = 0; trial < 10; ++trial) {
    ChannelSet cs = synthetic_channels(rng, 3, 2, 4);
    const CMat W = random_cmat(rng, 3, 5);
    const CVec phi = random_phases(rng, 4);
    const CMat comp = composite_user_channels(cs, phi);
    AuxiliaryState aux;
    aux.ratios = optimal_ratios(comp, W, noise);
    aux.scales = optimal_scales(comp, W, aux.ratios, noise);
    const double f = transformed_objective(comp, W, aux, noise);
    const double rate = sum_rate(comp, W, noise);
    worst = std::max(worst, std::abs(f - rate));
  }
  r.passed = worst <= 1e-9;
  r.detail = "max |f - rate| " + fmt(worst);
  return r;
}

CheckResult check_majorization() {
  CheckResult r{"curvature-majorization", true, ""};
  Rng rng(13);
  double worst_gap = 0.0, worst_touch = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    ChannelSet cs = synthetic_channels(rng, 2, 1, 3);
    const CMat W = random_cmat(rng, 2, 3);
    const CVec u = random_cvec(rng, 6);
    const CVec hat = random_phases(rng, 3);
    const SurrogateData sd = build_surrogate(cs, W, u, hat, 0.1);
    worst_touch = std::max(
        worst_touch,
        std::abs(surrogate_value(sd, hat) - embedded_quadratic(sd, hat)));
    for (int i = 0; i < 100; ++i) {
      const CVec phi = random_phases(rng, 3);
      const double gap =
          embedded_quadratic(sd, phi) - surrogate_value(sd, phi);
      worst_gap = std::max(worst_gap, gap);
    }
  }
  r.passed = worst_gap <= 1e-9 && worst_touch <= 1e-10;
  r.detail =
      "max overshoot " + fmt(worst_gap) + ", touch gap " + fmt(worst_touch);
  return r;
}

CheckResult check_qp_oracle() {
  CheckResult r{"beamformer-oracle", true, ""};
  Rng rng(14);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    QpProblem p;
    const CMat R = random_cmat(rng, 8, 8);
    p.gram = R.adjoint() * R;
    p.gram = 0.5 * (p.gram + p.gram.adjoint().eval());
    p.linear = random_cvec(rng, 8);
    p.halfspace_normal = random_cvec(rng, 8);
    p.power = 1.0;
    p.halfspace_offset = 0.3 * p.halfspace_normal.norm();
    const QpSolution sol = solve_qp(p, 1e-10);
    const PgResult ref = pg_reference_qp(p, 30000);
    const double rel = std::abs(sol.objective - ref.objective) /
                       std::max(1.0, std::abs(ref.objective));
    worst = std::max(worst, rel);
  }
  r.passed = worst <= 1e-5;
  r.detail = "max relative objective gap " + fmt(worst);
  return r;
}

CheckResult check_phi_oracle() {
  CheckResult r{"reflection-step-oracle", true, ""};
  Rng rng(15);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 4;
    CompactForms cf;
    const CMat R = random_cmat(rng, n, n);
    cf.phi_quad = R.adjoint() * R;
    cf.phi_quad = 0.5 * (cf.phi_quad + cf.phi_quad.adjoint().eval());
    cf.phi_linear = 2.0 * random_cvec(rng, n);

    AdmmState st;
    st.phi = random_phases(rng, n);
    st.varphi = random_phases(rng, n);
    st.mu = 0.3 * random_cvec(rng, n);
    st.rho = 1.0;

    SurrogateData sd;
    sd.u_tilde = random_cvec(rng, n);
    sd.phi_hat = st.varphi;
    sd.eps4 = std::real(sd.u_tilde.dot(st.varphi)) + 0.2;

    const PhiStepResult step = solve_phi_step(cf, sd, st, 1e-10);
    const CMat quad =
        cf.phi_quad + 0.5 * st.rho * CMat::Identity(n, n);
    const CVec lin = cf.phi_linear + st.rho * st.varphi - st.mu;
    auto objective = [&](const CVec& x) {
      return std::real((x.adjoint() * quad * x).value()) -
             std::real(lin.dot(x));
    };
    const PgResult ref =
        pg_reference_phi_step(quad, lin, sd.u_tilde, sd.eps4, 30000);
    const double rel = std::abs(objective(step.phi) - ref.objective) /
                       std::max(1.0, std::abs(ref.objective));
    worst = std::max(worst, rel);
  }
  r.passed = worst <= 1e-5;
  r.detail = "max relative objective gap " + fmt(worst);
  return r;
}

CheckResult check_filter_optimality() {
  CheckResult r{"receive-filter-optimality", true, ""};
  Rng rng(16);
  ChannelSet cs = synthetic_channels(rng, 3, 1, 4);
  const CMat W = random_cmat(rng, 3, 4);
  const CVec phi = random_phases(rng, 4);
  const CVec u_star = update_receive_filter(cs, phi, W);
  const double best = radar_snr_bound(cs, phi, W, u_star, 10, 1.0, 0.1);
  double max_other = 0.0;
  for (int i = 0; i < 50; ++i) {
    const CVec u = random_cvec(rng, 12);
    max_other =
        std::max(max_other, radar_snr_bound(cs, phi, W, u, 10, 1.0, 0.1));
  }
  r.passed = best >= max_other - 1e-9 * std::max(1.0, best);
  r.detail = "filter bound " + fmt(best) + " vs best random " + fmt(max_other);
  return r;
}

Scenario tiny_scenario() {
  Scenario s = desk_scenario();
  s.config.antennas = 2;
  s.config.users = 1;
  s.config.user_noise_w.assign(1, s.config.user_noise_w[0]);
  s.config.ris_elements = 4;
  s.config.radar_snr_min = 1.0; // 0 dB keeps the tiny instance feasible
  s.config.max_outer = 25;
  return s;
}

CheckResult check_solve_invariants() {
  CheckResult r{"solve-invariants", true, ""};
  const Scenario s = tiny_scenario();
  Rng rng = Rng::derive(s.config.seed, 0);
  const ChannelSet cs = generate_channels(s.config, s.geometry, rng);
  const SolveReport rep = solve(cs, s.config);

  std::vector<std::string> problems;
  if (rep.termination == Termination::kInfeasible ||
      rep.termination == Termination::kDegenerate)
    problems.push_back(std::string("termination ") +
                       termination_name(rep.termination));
  if (rep.beamformer.squaredNorm() > s.config.power_w + 1e-8)
    problems.push_back("power budget exceeded");
  for (Eigen::Index i = 0; i < rep.reflection.size(); ++i)
    if (std::abs(std::abs(rep.reflection(i)) - 1.0) > 1e-12)
      problems.push_back("reflection left the unit circle");
  if (rep.radar_bound < s.config.radar_snr_min * (1.0 - 1e-6))
    problems.push_back("radar floor violated");
  for (size_t i = 1; i < rep.trace.size(); ++i)
    if (rep.trace[i].sum_rate < rep.trace[i - 1].sum_rate - 1e-6)
      problems.push_back("sum rate decreased");

  r.passed = problems.empty();
  if (!problems.empty()) {
    r.detail = problems[0];
  } else {
    r.detail = "rate " + fmt(rep.sum_rate) + " in " +
               std::to_string(rep.iterations) + " iterations";
  }
  return r;
}

CheckResult check_determinism() {
  CheckResult r{"determinism", true, ""};
  const Scenario s = tiny_scenario();
  Rng rng1 = Rng::derive(s.config.seed, 0);
  Rng rng2 = Rng::derive(s.config.seed, 0);
  const ChannelSet cs1 = generate_channels(s.config, s.geometry, rng1);
  const ChannelSet cs2 = generate_channels(s.config, s.geometry, rng2);
  if (channel_hash(cs1) != channel_hash(cs2)) {
    r.passed = false;
    r.detail = "channel draws diverged";
    return r;
  }
  const SolveReport a = solve(cs1, s.config);
  const SolveReport b = solve(cs2, s.config);
  r.passed = a.sum_rate == b.sum_rate && a.iterations == b.iterations;
  r.detail = r.passed ? "identical reruns" : "reruns diverged";
  return r;
}

CheckResult check_csv_round_trip() {
  CheckResult r{"csv-round-trip", true, ""};
  SweepResult res;
  res.parameter = SweepParam::kPower;
  res.rows.push_back({Method::kProposed, 5.0, 3.14159, 0.25, 4, 12.5, 0});
  res.rows.push_back({Method::kNoRis, 5.0, 2.5, 0.5, 4, 9.0, 1});
  const SweepResult back = parse_csv(format_csv(res));
  r.passed = back.rows.size() == res.rows.size();
  if (r.passed)
    for (size_t i = 0; i < res.rows.size(); ++i) {
      const SweepRow& x = res.rows[i];
      const SweepRow& y = back.rows[i];
      if (x.method != y.method || x.value != y.value ||
          x.mean_sum_rate != y.mean_sum_rate ||
          x.std_sum_rate != y.std_sum_rate || x.trials != y.trials ||
          x.mean_iters != y.mean_iters || x.failures != y.failures)
        r.passed = false;
    }
  r.detail = r.passed ? "exact round trip" : "round trip altered a row";
  return r;
}

}  // namespace

std::vector<CheckResult> run_self_check() {
  return {
      check_expansion(),      check_tightness(),
      check_majorization(),   check_qp_oracle(),
      check_phi_oracle(),     check_filter_optimality(),
      check_solve_invariants(), check_determinism(),
      check_csv_round_trip(),
  };
}

}  // namespace risac
