#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "risac/scenario.hpp"
#include "risac/types.hpp"

namespace risac {

/// Seeded stream with hand-rolled uniform and Box-Muller transforms so the
/// draw sequence is identical everywhere (std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

  /// Independent stream for (seed, stream_id); channel draws for trial t use
  /// stream 2t, baseline phase draws use 2t + 1.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed) ^ mix(0x517CC1B727220A95ULL * (stream + 1)));
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard complex normal: real and imaginary parts N(0, 1/2).
  Complex std_complex_normal() {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-std::log1p(-u1));  // already scaled for CN(0,1)
    double th = 2.0 * kPi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

  Complex complex_normal(double variance) {
    return std::sqrt(variance) * std_complex_normal();
  }

  Complex unit_phase() {
    double th = 2.0 * kPi * uniform();
    return {std::cos(th), std::sin(th)};
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {  // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

/// One realization of every link in the scene. Reflected links may be zeroed
/// (see strip_ris) to model operation without the surface.
struct ChannelSet {
  int antennas = 0;
  int users = 0;
  int ris_elements = 0;

  std::vector<CVec> bs_user;   // per user, length antennas, Rayleigh
  std::vector<CVec> ris_user;  // per user, length ris_elements, Rayleigh
  CMat bs_ris;                 // ris_elements x antennas, line of sight
  CVec bs_target;              // length antennas, line of sight
  CVec ris_target;             // length ris_elements, line of sight

  std::vector<double> bs_user_distance_m;  // sampled per realization
  double bs_target_distance_m = 0.0;
};

/// Half-wavelength ULA response; element i carries exp(j*pi*i*sin(angle)).
CVec steering_vector(int n, double angle_rad);

/// Draw order is frozen for reproducibility: user distances, target
/// distance, then direct-user fades, then surface-user fades; the
/// line-of-sight links consume no randomness.
ChannelSet generate_channels(const SystemConfig& config,
                             const ScenarioGeometry& geometry, Rng& rng);

/// Effective user channel: direct path plus the reflection through the
/// surface, h_d + G^T diag(phi) h_r (acts on signals via its transpose).
CVec composite_user_channel(const ChannelSet& cs, const CVec& phi, int k);

/// All composite user channels as columns of an antennas-by-users matrix.
CMat composite_user_channels(const ChannelSet& cs, const CVec& phi);

/// Round-trip target response seen from the array.
CVec target_steering(const ChannelSet& cs, const CVec& phi);

/// Rank-one symmetric (not Hermitian) two-way target channel v v^T.
CMat target_channel(const ChannelSet& cs, const CVec& phi);

/// Copy with all reflected links zeroed.
ChannelSet strip_ris(const ChannelSet& cs);

/// Text round trip for replaying a realization across solvers.
void save_channels(const std::string& path, const ChannelSet& cs);
ChannelSet load_channels(const std::string& path);

/// FNV-1a over the raw bit patterns; used to confirm that paired methods saw
/// identical draws.
std::uint64_t channel_hash(const ChannelSet& cs);

}  // namespace risac
