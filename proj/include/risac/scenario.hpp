#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace risac {

/// Closed interval [lo, hi]; lo == hi means a fixed distance.
struct DistanceRange {
  double lo = 0.0;
  double hi = 0.0;
  bool fixed() const { return lo == hi; }
};

/// Placement of BS, RIS, users and target, plus path-loss exponents.
/// Per-realization quantities (user and target distances) are ranges
/// sampled uniformly when channels are generated.
struct ScenarioGeometry {
  double bs_ris_distance_m = 0.0;
  double ris_target_distance_m = 0.0;
  double ris_user_distance_m = 0.0;
  DistanceRange bs_target_distance_m;
  DistanceRange bs_user_distance_m;

  double bs_ris_exponent = 0.0;
  double ris_target_exponent = 0.0;
  double ris_user_exponent = 0.0;
  double bs_target_exponent = 0.0;
  double bs_user_exponent = 0.0;

  // Line-of-sight angles (radians). The target azimuth is used for both the
  // BS and the RIS steering responses.
  double target_azimuth_rad = 0.0;
  double bs_ris_departure_rad = 0.78539816339744831;   // pi/4
  double ris_arrival_rad = -0.78539816339744831;       // -pi/4
};

/// Sizes, powers and solver knobs. Powers are stored linear (Watts); the
/// config file accepts dB / dBm where the key name says so.
struct SystemConfig {
  int antennas = 0;      // transmit antennas == receive antennas
  int users = 0;
  int ris_elements = 0;
  int samples = 0;       // radar samples accumulated per estimate

  double power_w = 0.0;            // total transmit power budget
  double radar_snr_min = 0.0;      // worst-case radar SNR floor, linear
  double target_rcs = 1.0;         // mean radar cross section
  double radar_noise_w = 0.0;      // receive-chain noise power
  std::vector<double> user_noise_w;  // one entry per user

  double admm_penalty = 1.0;

  double tol_outer = 1e-4;
  double tol_inner = 1e-4;
  double tol_qp = 1e-8;
  int max_outer = 100;
  int max_inner = 500;

  std::uint64_t seed = 1;
};

struct Scenario {
  SystemConfig config;
  ScenarioGeometry geometry;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

double db_to_linear(double db);
double linear_to_db(double x);
double dbm_to_watt(double dbm);

/// Distance-law attenuation: 1e-3 * d^(-alpha) (-30 dB at one meter).
double path_loss(double distance_m, double exponent);

/// Collects every constraint violation; empty result means the scenario is
/// usable. Never throws.
std::vector<std::string> validate(const Scenario& s);

/// Parse the key/value config text. Throws ConfigError listing all problems.
Scenario parse_scenario(const std::string& text, const std::string& origin);
Scenario load_scenario(const std::string& path);

/// Small default setup used by tests and `check`: 4 antennas, 2 users,
/// 16 elements, 100 samples, 15 W, 5 dB radar floor, -80 dBm noise.
Scenario desk_scenario();

}  // namespace risac
