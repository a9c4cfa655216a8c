#include "risac/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace risac {

const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::kPower: return "power";
    case SweepParam::kElements: return "elements";
    case SweepParam::kRadarSnr: return "radar_snr";
  }
  return "unknown";
}

bool parse_sweep_param(const std::string& text, SweepParam& out) {
  if (text == "power") {
    out = SweepParam::kPower;
  } else if (text == "elements") {
    out = SweepParam::kElements;
  } else if (text == "radar_snr") {
    out = SweepParam::kRadarSnr;
  } else {
    return false;
  }
  return true;
}

std::vector<std::string> validate(const SweepSpec& spec) {
  std::vector<std::string> v;
  if (spec.values.empty()) v.push_back("value list must not be empty");
  for (size_t i = 1; i < spec.values.size(); ++i)
    if (spec.values[i] <= spec.values[i - 1]) {
      v.push_back("value list must be strictly increasing");
      break;
    }
  if (spec.parameter == SweepParam::kElements)
    for (double x : spec.values)
      if (x < 1.0 || x != std::floor(x)) {
        v.push_back("element counts must be positive integers");
        break;
      }
  if (spec.parameter == SweepParam::kPower)
    for (double x : spec.values)
      if (!(x > 0.0)) {
        v.push_back("power values must be positive");
        break;
      }
  if (spec.trials < 1) v.push_back("trials must be at least 1");
  if (spec.methods.empty()) v.push_back("method list must not be empty");
  for (size_t i = 0; i < spec.methods.size(); ++i)
    for (size_t j = i + 1; j < spec.methods.size(); ++j)
      if (spec.methods[i] == spec.methods[j]) {
        v.push_back("method list has duplicates");
        i = spec.methods.size();
        break;
      }
  for (auto& msg : risac::validate(spec.base)) v.push_back(msg);
  return v;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_tokens(std::string s) {
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string dirname_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  if (slash == std::string::npos) return ".";
  if (slash == 0) return "/";
  return path.substr(0, slash);
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text, const std::string& origin,
                           const std::string& base_dir) {
  std::vector<std::string> errors;
  std::map<std::string, std::string> entries;
  {
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
      std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) {
        errors.push_back(origin + ":" + std::to_string(lineno) +
                         ": empty key or value");
        continue;
      }
      if (!entries.emplace(key, value).second)
        errors.push_back(origin + ": duplicate key '" + key + "'");
    }
  }

  SweepSpec spec;
  auto take = [&](const char* key) -> std::string {
    auto it = entries.find(key);
    if (it == entries.end()) return "";
    std::string v = it->second;
    entries.erase(it);
    return v;
  };

  const std::string param = take("parameter");
  if (param.empty())
    errors.push_back("missing required key 'parameter'");
  else if (!parse_sweep_param(param, spec.parameter))
    errors.push_back("unknown parameter '" + param +
                     "' (expected power, elements or radar_snr)");

  const std::string values = take("values");
  if (values.empty()) {
    errors.push_back("missing required key 'values'");
  } else {
    for (const std::string& tok : split_tokens(values)) {
      try {
        size_t pos = 0;
        double x = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        spec.values.push_back(x);
      } catch (...) {
        errors.push_back("key 'values' expects numbers, got '" + tok + "'");
      }
    }
  }

  const std::string trials = take("trials");
  if (!trials.empty()) {
    try {
      size_t pos = 0;
      spec.trials = std::stoi(trials, &pos);
      if (pos != trials.size()) throw std::invalid_argument("");
    } catch (...) {
      errors.push_back("key 'trials' expects an integer");
    }
  }

  const std::string methods = take("methods");
  if (methods.empty()) {
    spec.methods = {Method::kProposed, Method::kRandomRis, Method::kNoRis};
  } else {
    for (const std::string& tok : split_tokens(methods)) {
      Method m;
      if (!parse_method(tok, m))
        errors.push_back("unknown method '" + tok + "'");
      else
        spec.methods.push_back(m);
    }
  }

  const std::string scenario = take("scenario");
  if (scenario.empty()) {
    spec.base = desk_scenario();
  } else {
    std::string path = scenario;
    if (path[0] != '/' && !base_dir.empty())
      path = base_dir + "/" + scenario;
    try {
      spec.base = load_scenario(path);
    } catch (const ConfigError& e) {
      errors.push_back(e.what());
    }
  }

  for (const auto& [key, unused] : entries) {
    (void)unused;
    errors.push_back("unknown key '" + key + "'");
  }
  if (errors.empty())
    for (auto& msg : validate(spec)) errors.push_back(msg);
  if (!errors.empty()) {
    std::string joined = origin + ": invalid sweep spec";
    for (const auto& e : errors) joined += "\n  " + e;
    throw ConfigError(joined);
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_spec(buf.str(), path, dirname_of(path));
}

namespace {

struct TrialOutcome {
  double sum_rate = 0.0;
  int iterations = 0;
  bool failed = false;
};

SystemConfig config_for(const SweepSpec& spec, double value) {
  SystemConfig c = spec.base.config;
  switch (spec.parameter) {
    case SweepParam::kPower:
      c.power_w = value;
      break;
    case SweepParam::kElements:
      c.ris_elements = static_cast<int>(value);
      break;
    case SweepParam::kRadarSnr:
      c.radar_snr_min = db_to_linear(value);
      break;
  }
  return c;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  threads = std::min(threads, spec.trials);

  SweepResult result;
  result.parameter = spec.parameter;
  const size_t n_methods = spec.methods.size();

  for (double value : spec.values) {
    const SystemConfig config = config_for(spec, value);
    std::vector<TrialOutcome> outcomes(
        static_cast<size_t>(spec.trials) * n_methods);

    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= spec.trials) return;
        Rng channel_rng = Rng::derive(config.seed, 2 * t);
        const ChannelSet cs =
            generate_channels(config, spec.base.geometry, channel_rng);
        Rng phase_rng =
            Rng::derive(config.seed, 2 * static_cast<std::uint64_t>(t) + 1);
        CVec random_phi(cs.ris_elements);
        for (int n = 0; n < cs.ris_elements; ++n)
          random_phi(n) = phase_rng.unit_phase();

        for (size_t mi = 0; mi < n_methods; ++mi) {
          TrialOutcome& out =
              outcomes[static_cast<size_t>(t) * n_methods + mi];
          try {
            SolveReport rep;
            switch (spec.methods[mi]) {
              case Method::kProposed:
                rep = solve(cs, config);
                break;
              case Method::kRandomRis:
                rep = solve_baseline(cs, config, Method::kRandomRis,
                                     random_phi);
                break;
              case Method::kNoRis:
                rep = solve_baseline(cs, config, Method::kNoRis);
                break;
            }
            out.sum_rate = rep.sum_rate;
            out.iterations = rep.iterations;
            out.failed = rep.termination == Termination::kInfeasible ||
                         rep.termination == Termination::kDegenerate;
          } catch (const std::exception&) {
            out.failed = true;
          }
        }
      }
    };

    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    for (size_t mi = 0; mi < n_methods; ++mi) {
      SweepRow row;
      row.method = spec.methods[mi];
      row.value = value;
      row.trials = spec.trials;
      double sum = 0.0, sum_sq = 0.0, iters = 0.0;
      int ok = 0;
      for (int t = 0; t < spec.trials; ++t) {
        const TrialOutcome& out =
            outcomes[static_cast<size_t>(t) * n_methods + mi];
        if (out.failed) {
          ++row.failures;
          continue;
        }
        sum += out.sum_rate;
        sum_sq += out.sum_rate * out.sum_rate;
        iters += out.iterations;
        ++ok;
      }
      if (ok == 0) {
        row.mean_sum_rate = std::nan("");
        row.std_sum_rate = std::nan("");
        row.mean_iters = std::nan("");
      } else {
        row.mean_sum_rate = sum / ok;
        row.std_sum_rate =
            ok > 1 ? std::sqrt(std::max(
                         0.0, (sum_sq - sum * sum / ok) / (ok - 1)))
                   : 0.0;
        row.mean_iters = iters / ok;
      }
      result.rows.push_back(row);
    }
  }

  // Canonical row order: method (proposed, random-ris, no-ris), then value.
  std::vector<SweepRow> ordered;
  ordered.reserve(result.rows.size());
  for (Method m : {Method::kProposed, Method::kRandomRis, Method::kNoRis})
    for (const SweepRow& row : result.rows)
      if (row.method == m) ordered.push_back(row);
  result.rows = std::move(ordered);
  return result;
}

std::string format_csv(const SweepResult& result) {
  std::string out =
      "method,param,value,mean_sum_rate,std_sum_rate,trials,mean_iters,"
      "failures\n";
  const char* param = sweep_param_name(result.parameter);
  for (const SweepRow& row : result.rows) {
    out += method_name(row.method);
    out += ',';
    out += param;
    out += ',';
    out += fmt_double(row.value);
    out += ',';
    out += fmt_double(row.mean_sum_rate);
    out += ',';
    out += fmt_double(row.std_sum_rate);
    out += ',';
    out += std::to_string(row.trials);
    out += ',';
    out += fmt_double(row.mean_iters);
    out += ',';
    out += std::to_string(row.failures);
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << format_csv(result);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

SweepResult parse_csv(const std::string& text) {
  SweepResult result;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV");
  const std::string header =
      "method,param,value,mean_sum_rate,std_sum_rate,trials,mean_iters,"
      "failures";
  if (trim(line) != header)
    throw std::runtime_error("unexpected CSV header: " + line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected 8 cells");
    SweepRow row;
    if (!parse_method(cells[0], row.method))
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": unknown method '" + cells[0] + "'");
    if (!parse_sweep_param(cells[1], result.parameter))
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": unknown param '" + cells[1] + "'");
    row.value = std::strtod(cells[2].c_str(), nullptr);
    row.mean_sum_rate = std::strtod(cells[3].c_str(), nullptr);
    row.std_sum_rate = std::strtod(cells[4].c_str(), nullptr);
    row.trials = std::stoi(cells[5]);
    row.mean_iters = std::strtod(cells[6].c_str(), nullptr);
    row.failures = std::stoi(cells[7]);
    result.rows.push_back(row);
  }
  return result;
}

bool any_cell_all_failed(const SweepResult& result) {
  for (const SweepRow& row : result.rows)
    if (row.trials > 0 && row.failures == row.trials) return true;
  return false;
}

}  // namespace risac
