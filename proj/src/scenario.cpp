#include "risac/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace risac {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_loss(double distance_m, double exponent) {
  return 1e-3 * std::pow(distance_m, -exponent);
}

namespace {

void check_range(const DistanceRange& r, const char* name,
                 std::vector<std::string>& out) {
  if (r.lo <= 0.0)
    out.push_back(std::string(name) + " must be positive");
  if (r.hi < r.lo)
    out.push_back(std::string(name) + " range upper bound below lower bound");
}

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> v;
  const SystemConfig& c = s.config;
  const ScenarioGeometry& g = s.geometry;

  if (c.antennas < 1) v.push_back("antenna count must be at least 1");
  if (c.users < 1) v.push_back("user count must be at least 1");
  if (c.ris_elements < 1) v.push_back("RIS element count must be at least 1");
  if (c.samples < 1) v.push_back("radar sample count must be at least 1");
  if (!(c.power_w > 0.0)) v.push_back("power budget must be positive");
  if (!(c.radar_snr_min > 0.0))
    v.push_back("radar SNR floor must be positive");
  if (!(c.target_rcs > 0.0)) v.push_back("target RCS must be positive");
  if (!(c.radar_noise_w > 0.0))
    v.push_back("radar noise power must be positive");
  if (c.users >= 1 && static_cast<int>(c.user_noise_w.size()) != c.users)
    v.push_back("user noise list must have exactly one entry per user");
  for (double n : c.user_noise_w)
    if (!(n > 0.0)) v.push_back("user noise power must be positive");
  if (!(c.admm_penalty > 0.0)) v.push_back("penalty weight must be positive");
  if (!(c.tol_outer > 0.0) || !(c.tol_inner > 0.0) || !(c.tol_qp > 0.0))
    v.push_back("tolerances must be positive");
  if (c.max_outer < 1 || c.max_inner < 1)
    v.push_back("iteration limits must be at least 1");

  if (g.bs_ris_distance_m <= 0.0)
    v.push_back("bs_ris_distance_m must be positive");
  if (g.ris_target_distance_m <= 0.0)
    v.push_back("ris_target_distance_m must be positive");
  if (g.ris_user_distance_m <= 0.0)
    v.push_back("ris_user_distance_m must be positive");
  check_range(g.bs_target_distance_m, "bs_target_distance_m", v);
  check_range(g.bs_user_distance_m, "bs_user_distance_m", v);
  for (double e : {g.bs_ris_exponent, g.ris_target_exponent,
                   g.ris_user_exponent, g.bs_target_exponent,
                   g.bs_user_exponent})
    if (e < 2.0) v.push_back("path-loss exponents must be at least 2");

  return v;
}

namespace {

struct RawConfig {
  std::map<std::string, std::vector<std::string>> entries;
  std::vector<std::string> errors;
  std::vector<std::string> touched;

  bool has(const std::string& key) const { return entries.count(key) > 0; }

  const std::vector<std::string>* get(const std::string& key) {
    touched.push_back(key);
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

RawConfig tokenize(const std::string& text, const std::string& origin,
                   std::vector<std::string>& errors) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string rest = trim(line.substr(eq + 1));
    if (key.empty() || rest.empty()) {
      errors.push_back(origin + ":" + std::to_string(lineno) +
                       ": empty key or value");
      continue;
    }
    if (raw.entries.count(key)) {
      errors.push_back(origin + ": duplicate key '" + key + "'");
      continue;
    }
    std::vector<std::string> tokens;
    std::istringstream ts(rest);
    std::string tok;
    while (ts >> tok) tokens.push_back(tok);
    raw.entries[key] = tokens;
  }
  return raw;
}

bool to_double(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

class Reader {
 public:
  Reader(RawConfig& raw, std::vector<std::string>& errors)
      : raw_(raw), errors_(errors) {}

  double number(const std::string& key) {
    const auto* v = raw_.get(key);
    if (!v) {
      errors_.push_back("missing required key '" + key + "'");
      return 0.0;
    }
    double x = 0.0;
    if (v->size() != 1 || !to_double((*v)[0], x))
      errors_.push_back("key '" + key + "' expects a single number");
    return x;
  }

  double number_or(const std::string& key, double fallback) {
    if (!raw_.has(key)) {
      raw_.touched.push_back(key);
      return fallback;
    }
    return number(key);
  }

  int integer(const std::string& key) {
    double x = number(key);
    int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
      errors_.push_back("key '" + key + "' expects an integer");
    return i;
  }

  int integer_or(const std::string& key, int fallback) {
    if (!raw_.has(key)) {
      raw_.touched.push_back(key);
      return fallback;
    }
    return integer(key);
  }

  std::uint64_t unsigned64_or(const std::string& key,
                              std::uint64_t fallback) {
    if (!raw_.has(key)) {
      raw_.touched.push_back(key);
      return fallback;
    }
    const auto* v = raw_.get(key);
    if (!v || v->size() != 1) {
      errors_.push_back("key '" + key + "' expects a single unsigned integer");
      return 0;
    }
    try {
      size_t pos = 0;
      unsigned long long x = std::stoull((*v)[0], &pos);
      if (pos != (*v)[0].size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      errors_.push_back("key '" + key + "' expects a single unsigned integer");
      return 0;
    }
  }

  DistanceRange range(const std::string& key) {
    const auto* v = raw_.get(key);
    DistanceRange r;
    if (!v) {
      errors_.push_back("missing required key '" + key + "'");
      return r;
    }
    if (v->empty() || v->size() > 2) {
      errors_.push_back("key '" + key + "' expects one or two numbers");
      return r;
    }
    if (!to_double((*v)[0], r.lo)) {
      errors_.push_back("key '" + key + "' expects numbers");
      return r;
    }
    r.hi = r.lo;
    if (v->size() == 2 && !to_double((*v)[1], r.hi))
      errors_.push_back("key '" + key + "' expects numbers");
    return r;
  }

  // One value broadcasts to all users; otherwise exactly one per user.
  std::vector<double> per_user(const std::string& key, int users) {
    const auto* v = raw_.get(key);
    std::vector<double> out;
    if (!v) {
      errors_.push_back("missing required key '" + key + "'");
      return out;
    }
    for (const auto& s : *v) {
      double x = 0.0;
      if (!to_double(s, x)) {
        errors_.push_back("key '" + key + "' expects numbers");
        return {};
      }
      out.push_back(x);
    }
    if (out.size() == 1 && users > 1) out.assign(users, out[0]);
    if (users > 0 && static_cast<int>(out.size()) != users)
      errors_.push_back("key '" + key + "' expects one value or one per user");
    return out;
  }

 private:
  RawConfig& raw_;
  std::vector<std::string>& errors_;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  std::vector<std::string> errors;
  RawConfig raw = tokenize(text, origin, errors);
  Reader rd(raw, errors);

  Scenario s;
  SystemConfig& c = s.config;
  ScenarioGeometry& g = s.geometry;

  c.antennas = rd.integer("antennas");
  c.users = rd.integer("users");
  c.ris_elements = rd.integer("ris_elements");
  c.samples = rd.integer("samples");
  c.power_w = rd.number("power_w");
  c.radar_snr_min = db_to_linear(rd.number("radar_snr_db"));
  c.target_rcs = rd.number("target_rcs");
  c.radar_noise_w = dbm_to_watt(rd.number("radar_noise_dbm"));
  {
    auto dbm = rd.per_user("user_noise_dbm", c.users);
    for (double x : dbm) c.user_noise_w.push_back(dbm_to_watt(x));
  }
  c.admm_penalty = rd.number_or("admm_penalty", 1.0);
  c.tol_outer = rd.number_or("tol_outer", 1e-4);
  c.tol_inner = rd.number_or("tol_inner", 1e-4);
  c.tol_qp = rd.number_or("tol_qp", 1e-8);
  c.max_outer = rd.integer_or("max_outer", 100);
  c.max_inner = rd.integer_or("max_inner", 500);
  c.seed = rd.unsigned64_or("seed", 1);

  g.bs_ris_distance_m = rd.number("bs_ris_distance_m");
  g.ris_target_distance_m = rd.number("ris_target_distance_m");
  g.ris_user_distance_m = rd.number("ris_user_distance_m");
  g.bs_target_distance_m = rd.range("bs_target_distance_m");
  g.bs_user_distance_m = rd.range("bs_user_distance_m");
  g.bs_ris_exponent = rd.number("bs_ris_exponent");
  g.ris_target_exponent = rd.number("ris_target_exponent");
  g.ris_user_exponent = rd.number("ris_user_exponent");
  g.bs_target_exponent = rd.number("bs_target_exponent");
  g.bs_user_exponent = rd.number("bs_user_exponent");
  g.target_azimuth_rad = rd.number_or("target_azimuth_rad", 0.0);
  g.bs_ris_departure_rad =
      rd.number_or("bs_ris_departure_rad", g.bs_ris_departure_rad);
  g.ris_arrival_rad = rd.number_or("ris_arrival_rad", g.ris_arrival_rad);

  for (const auto& [key, unused] : raw.entries) {
    (void)unused;
    bool known = false;
    for (const auto& t : raw.touched)
      if (t == key) { known = true; break; }
    if (!known) errors.push_back("unknown key '" + key + "'");
  }

  if (errors.empty())
    for (auto& msg : validate(s)) errors.push_back(msg);

  if (!errors.empty()) {
    std::string joined = origin + ": invalid scenario";
    for (const auto& e : errors) joined += "\n  " + e;
    throw ConfigError(joined);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

Scenario desk_scenario() {
  Scenario s;
  SystemConfig& c = s.config;
  c.antennas = 4;
  c.users = 2;
  c.ris_elements = 16;
  c.samples = 100;
  c.power_w = 15.0;
  c.radar_snr_min = db_to_linear(5.0);
  c.target_rcs = 1.0;
  c.radar_noise_w = dbm_to_watt(-80.0);
  c.user_noise_w.assign(c.users, dbm_to_watt(-80.0));
  c.seed = 1;

  ScenarioGeometry& g = s.geometry;
  g.bs_ris_distance_m = 50.0;
  g.ris_target_distance_m = 3.0;
  g.ris_user_distance_m = 8.0;
  g.bs_target_distance_m = {50.0, 53.0};
  g.bs_user_distance_m = {50.0, 58.0};
  g.bs_ris_exponent = 2.2;
  g.ris_target_exponent = 2.2;
  g.ris_user_exponent = 2.3;
  g.bs_target_exponent = 2.4;
  g.bs_user_exponent = 3.5;
  return s;
}

}  // namespace risac
