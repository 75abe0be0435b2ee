#include "pulseforge_cli/config.hpp"

#include <pulseforge/analysis.hpp>
#include <pulseforge/csv.hpp>
#include <pulseforge/errors.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pulseforge::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::ConfigError, msg);
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    config_error(key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

}  // namespace

RunConfig::RunConfig() {
  defaults_ = {
      {"mode", "design-pop"},
      {"out", "pulseforge-out"},
      {"seed", "0"},
      {"threads", "0"},
      {"rates.t1_01", "9.5"},
      {"rates.t1_12", "4.6"},
      {"rates.t2_01", "6"},
      {"rates.t2_12", "1.9"},
      {"target.p1", "0.3"},
      {"target.p2", "0.2"},
      {"target.h2", "0.2"},
      {"target.h3", "0.3"},
      {"t_f", "3"},
      {"a", "0"},
      {"dt", "0.001"},
      {"omega_cap", "100"},
      {"grid_step", "0.02"},
      {"sample_every", "1"},
      {"feasibility.t_f", "3,5,10"},
      {"simulate.pulses", ""},
      {"simulate.initial", "0"},
      {"tomo.reads", ""},
      {"tomo.calibration", ""},
      {"tomo.clip", "0"},
      {"state.f1", "0.3"},
      {"state.f2", "0.2"},
      {"state.h1", "0.1"},
      {"state.h2", "0.1"},
      {"state.h3", "0.1"},
      {"qb.charge_level", "0.8"},
      {"qb.residual_level", "0.3"},
      {"qb.t_charge", "1"},
      {"qb.t_store", "1.2"},
      {"qb.t_discharge", "1"},
      {"qb.omega10", csv::shortest(QBConfig{}.omega10)},
  };
  values_ = defaults_;
}

const std::vector<std::string>& RunConfig::modes() {
  static const std::vector<std::string> m = {"design-pop",      "design-coh",
                                             "simulate",        "feasibility-pop",
                                             "feasibility-coh", "tomo",
                                             "qb"};
  return m;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  if (!defaults_.contains(k)) config_error("unknown key '" + k + "'");
  const std::string v = trim(value);
  if (k == "mode" && std::find(modes().begin(), modes().end(), v) == modes().end()) {
    config_error("unknown mode '" + v + "'");
  }
  values_[k] = v;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error("expected key=value, got '" + assignment + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos) {
      config_error(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_assignment(line);
    } catch (const Error& e) {
      config_error(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    config_error("config file not found: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  merge_text(buf.str(), path.string());
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error("unknown key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return parse_number(key, get(key)); }

double RunConfig::positive(const std::string& key) const {
  const double v = number(key);
  if (!(v > 0.0)) config_error(key + " must be positive");
  return v;
}

long long RunConfig::integer(const std::string& key) const {
  const std::string& text = get(key);
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    config_error(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> RunConfig::number_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number(key, trim(item)));
  if (out.empty()) config_error(key + ": expected a comma-separated list");
  return out;
}

bool RunConfig::is_default(const std::string& key) const {
  return get(key) == defaults_.at(key);
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace pulseforge::cli
