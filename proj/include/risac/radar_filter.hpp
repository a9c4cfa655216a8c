#pragma once

#include "risac/channels.hpp"
#include "risac/scenario.hpp"
#include "risac/types.hpp"

namespace risac {

class DegenerateTargetError : public std::runtime_error {
 public:
  explicit DegenerateTargetError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Filtered-domain target response t = vec(H_t W), built from the rank-one
/// structure H_t = v v^T so the Kronecker lift is never materialized.
CVec target_response(const ChannelSet& cs, const CVec& phi, const CMat& W);

/// Worst-case radar SNR after receive filtering with u:
///   samples * rcs * |u^H t|^2 / (noise * u^H u).
double radar_snr_bound(const ChannelSet& cs, const CVec& phi, const CMat& W,
                       const CVec& u, int samples, double target_rcs,
                       double radar_noise_w);
double radar_snr_bound(const ChannelSet& cs, const CVec& phi, const CMat& W,
                       const CVec& u, const SystemConfig& config);

/// SNR-optimal receive filter t / |t|^2; after this update u^H t = 1, so the
/// filtered response is real and positive. Throws DegenerateTargetError when
/// |t| < 1e-14.
CVec update_receive_filter(const ChannelSet& cs, const CVec& phi,
                           const CMat& W);

/// Threshold the filtered response must clear for the SNR floor:
///   sqrt(snr_min * radar_noise * |u|^2 / (samples * rcs)).
double min_filtered_response(const CVec& u, double radar_snr_min,
                             double radar_noise_w, int samples,
                             double target_rcs);
double min_filtered_response(const CVec& u, const SystemConfig& config);

/// Normal of the linearized radar constraint in w: v with
///   Re{v^H w} = Re{u^H vec(H_t W)}.
CVec radar_halfspace_normal(const ChannelSet& cs, const CVec& phi,
                            const CVec& u);

/// The constraint set {Re{v^H w} >= offset, |w| <= sqrt(power)} is nonempty
/// iff sqrt(power) * |v| >= offset (Cauchy-Schwarz).
bool feasibility_check(const CVec& v, double power_w, double offset);

}  // namespace risac
