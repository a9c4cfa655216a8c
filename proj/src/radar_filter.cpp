#include "risac/radar_filter.hpp"

#include "risac/linalg.hpp"

namespace risac {

CVec target_response(const ChannelSet& cs, const CVec& phi, const CMat& W) {
  const CVec v = target_steering(cs, phi);
  // H_t W = v (v^T W), column j scaled by v^T w_j.
  const Eigen::RowVectorXcd scales = v.transpose() * W;
  CMat TW = v * scales;
  return vec(TW);
}

double radar_snr_bound(const ChannelSet& cs, const CVec& phi, const CMat& W,
                       const CVec& u, int samples, double target_rcs,
                       double radar_noise_w) {
  const CVec t = target_response(cs, phi, W);
  const Complex ut = u.dot(t);  // Eigen dot conjugates the left argument
  const double un2 = u.squaredNorm();
  if (un2 <= 0.0) return 0.0;
  return static_cast<double>(samples) * target_rcs * std::norm(ut) /
         (radar_noise_w * un2);
}

double radar_snr_bound(const ChannelSet& cs, const CVec& phi, const CMat& W,
                       const CVec& u, const SystemConfig& config) {
  return radar_snr_bound(cs, phi, W, u, config.samples, config.target_rcs,
                         config.radar_noise_w);
}

CVec update_receive_filter(const ChannelSet& cs, const CVec& phi,
                           const CMat& W) {
  const CVec t = target_response(cs, phi, W);
  const double tn = t.norm();
  if (tn < 1e-14) {
    throw DegenerateTargetError(
        "target response is numerically zero; the reflected signal carries "
        "no energy for any receive filter");
  }
  return t / (tn * tn);
}

double min_filtered_response(const CVec& u, double radar_snr_min,
                             double radar_noise_w, int samples,
                             double target_rcs) {
  return std::sqrt(radar_snr_min * radar_noise_w * u.squaredNorm() /
                   (static_cast<double>(samples) * target_rcs));
}

double min_filtered_response(const CVec& u, const SystemConfig& config) {
  return min_filtered_response(u, config.radar_snr_min, config.radar_noise_w,
                               config.samples, config.target_rcs);
}

CVec radar_halfspace_normal(const ChannelSet& cs, const CVec& phi,
                            const CVec& u) {
  const CVec v = target_steering(cs, phi);
  const int cols = static_cast<int>(u.size()) / static_cast<int>(v.size());
  const CMat U = unvec(u, static_cast<int>(v.size()), cols);
  // u^H vec(H_t W) = sum_j u_j^H v (v^T w_j) = sum_j (v^H u_j)^* v^T w_j,
  // so the normal's block j is conj(v) * (v^H u_j).
  const Eigen::RowVectorXcd scales = v.adjoint() * U;
  CMat V = v.conjugate() * scales;
  return vec(V);
}

bool feasibility_check(const CVec& v, double power_w, double offset) {
  return std::sqrt(power_w) * v.norm() >= offset;
}

}  // namespace risac
