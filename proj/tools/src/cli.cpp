#include "pulseforge_cli/cli.hpp"

#include <pulseforge/analysis.hpp>
#include <pulseforge/csv.hpp>
#include <pulseforge/design_coherence.hpp>
#include <pulseforge/design_population.hpp>
#include <pulseforge/errors.hpp>
#include <pulseforge/feasibility.hpp>
#include <pulseforge/lindblad.hpp>
#include <pulseforge/rates.hpp>
#include <pulseforge/tomography.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace pulseforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw Error(ErrorCode::IoError, "cannot create output directory " + dir_.string());
    }
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    body(os);
    os.flush();
    if (!os) throw Error(ErrorCode::IoError, "write failed: " + path.string());
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

// Errors raised while interpreting user-supplied values are configuration
// errors from the caller's point of view.
template <class F>
auto as_config(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::NegativeRate ||
        e.code() == ErrorCode::OutsideFamily) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
    throw;
  }
}

fs::path existing_file(const RunConfig& cfg, const std::string& key) {
  const fs::path p = cfg.get(key);
  if (!fs::is_regular_file(p)) {
    throw Error(ErrorCode::ConfigError, key + ": file not found: " + p.string());
  }
  return p;
}

template <class T, class Reader>
T read_file(const fs::path& path, Reader reader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return reader(in);
}

DecoherenceRates config_rates(const RunConfig& cfg) {
  return as_config([&] {
    return rates_from_times(cfg.positive("rates.t1_01"), cfg.positive("rates.t1_12"),
                            cfg.positive("rates.t2_01"), cfg.positive("rates.t2_12"));
  });
}

DesignOptions config_design(const RunConfig& cfg) {
  DesignOptions o;
  o.dt = cfg.positive("dt");
  o.omega_cap = cfg.positive("omega_cap");
  return o;
}

json rates_json(const DecoherenceRates& r) {
  return {{"Gamma1", r.Gamma1}, {"Gamma2", r.Gamma2}, {"gamma1", r.gamma1}, {"gamma2", r.gamma2}};
}

json report_json(const DesignReport& r) {
  return {{"feasible", r.feasible()},
          {"reason", std::string(to_string(r.reason))},
          {"detail", r.detail},
          {"delta", r.delta},
          {"max_omega01", r.max_omega01},
          {"max_omega12", r.max_omega12},
          {"capped_points", r.capped_points},
          {"design_min_eigenvalue", r.min_eigenvalue},
          {"closed_loop_error", r.closed_loop_error},
          {"verified", r.verified}};
}

json populations_json(const Populations& p) { return json::array({p[0], p[1], p[2]}); }

json physicality_json(const Trajectory& traj) {
  double trace = 0.0;
  double eig = 1.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    trace = std::max(trace, traj.trace_dev[k]);
    eig = std::min(eig, traj.min_eig[k]);
  }
  return {{"max_trace_dev", trace}, {"min_eigenvalue", eig}, {"max_herm_dev", traj.herm_dev_max}};
}

std::size_t sample_every(const RunConfig& cfg) {
  const long long n = cfg.integer("sample_every");
  if (n < 1) throw Error(ErrorCode::ConfigError, "sample_every must be >= 1");
  return static_cast<std::size_t>(n);
}

void run_design_pop(const RunConfig& cfg, Outputs& out, json& m, std::ostream& log) {
  const DecoherenceRates rates = config_rates(cfg);
  const DesignOptions opts = config_design(cfg);
  PopulationTarget target;
  target.p1_final = cfg.number("target.p1");
  target.p2_final = cfg.number("target.p2");
  target.t_f = cfg.positive("t_f");
  target.a = cfg.number("a");
  as_config([&] { validate(target); return 0; });

  const PopulationDesign d = as_config([&] { return try_design_population(target, rates, opts); });
  m["resolved"]["a"] = target.gradient();
  m["results"] = report_json(d.report);
  out.write("pulses.csv", [&](std::ostream& os) { csv::write_pulses(os, d.pulses); });
  out.write("design.csv", [&](std::ostream& os) {
    csv::write_design_aux(os, d.pulses, d.designed, ControlMode::population);
  });
  if (!d.report.feasible()) {
    throw Error(ErrorCode::InfeasibleTarget, "target (" + cfg.get("target.p1") + ", " +
                                                 cfg.get("target.p2") + ") infeasible [" +
                                                 std::string(to_string(d.report.reason)) +
                                                 "]: " + d.report.detail);
  }
  const Trajectory traj = evolve(ground_state(), d.pulses, rates, opts.dt, sample_every(cfg));
  out.write("trajectory.csv", [&](std::ostream& os) { csv::write_trajectory(os, traj); });
  const Populations final_p = populations(traj.states.back());
  const Populations ideal{1.0 - target.p1_final - target.p2_final, target.p1_final,
                          target.p2_final};
  m["results"]["final_populations"] = populations_json(final_p);
  m["results"]["population_error"] = population_error(ideal, final_p);
  m["results"]["physicality"] = physicality_json(traj);
  log << "design-pop: closed-loop error " << d.report.closed_loop_error << ", max |Omega| "
      << d.report.max_omega() << " /us\n";
}

void run_design_coh(const RunConfig& cfg, Outputs& out, json& m, std::ostream& log) {
  const DecoherenceRates rates = config_rates(cfg);
  const DesignOptions opts = config_design(cfg);
  CoherenceTarget target;
  target.h2_final = cfg.number("target.h2");
  target.h3_final = cfg.number("target.h3");
  target.t_f = cfg.positive("t_f");
  target.a = cfg.number("a");
  as_config([&] { validate(target); return 0; });

  const CoherenceDesign d = as_config([&] { return try_design_coherence(target, rates, opts); });
  m["resolved"]["a"] = target.gradient();
  m["results"] = report_json(d.report);
  m["results"]["h1_prediction_error"] = d.h1_prediction_error;
  m["results"]["min_purity_margin"] = d.min_purity_margin;
  out.write("pulses.csv", [&](std::ostream& os) { csv::write_pulses(os, d.pulses); });
  out.write("design.csv", [&](std::ostream& os) {
    csv::write_design_aux(os, d.pulses, d.designed, ControlMode::coherence);
  });
  if (!d.report.feasible()) {
    throw Error(ErrorCode::InfeasibleTarget, "target (" + cfg.get("target.h2") + ", " +
                                                 cfg.get("target.h3") + ") infeasible [" +
                                                 std::string(to_string(d.report.reason)) +
                                                 "]: " + d.report.detail);
  }
  const Trajectory traj = evolve(ground_state(), d.pulses, rates, opts.dt, sample_every(cfg));
  out.write("trajectory.csv", [&](std::ostream& os) { csv::write_trajectory(os, traj); });
  const DensityMatrix& last = traj.states.back();
  const double h2 = last(row_of(2), row_of(0)).real();
  const double h3 = last(row_of(0), row_of(1)).imag();
  m["results"]["final_h2"] = h2;
  m["results"]["final_h3"] = h3;
  m["results"]["coherence_error"] =
      coherence_error({target.h2_final, target.h3_final}, {h2, h3});
  m["results"]["physicality"] = physicality_json(traj);
  log << "design-coh: closed-loop error " << d.report.closed_loop_error << ", max |Omega| "
      << d.report.max_omega() << " /us\n";
}

void run_simulate(const RunConfig& cfg, Outputs& out, json& m, std::ostream& log) {
  const DecoherenceRates rates = config_rates(cfg);
  const double dt = cfg.positive("dt");
  const long long level = cfg.integer("simulate.initial");
  if (level < 0 || level > 2) throw Error(ErrorCode::ConfigError, "simulate.initial must be 0, 1 or 2");

  PulseSchedule pulses;
  if (cfg.get("simulate.pulses").empty()) {
    pulses = as_config([&] { return PulseSchedule::zero(cfg.positive("t_f"), dt); });
    m["resolved"]["pulses"] = "zero";
  } else {
    pulses = read_file<PulseSchedule>(existing_file(cfg, "simulate.pulses"),
                                      [](std::istream& in) { return csv::read_pulses(in); });
    m["resolved"]["pulses"] = cfg.get("simulate.pulses");
  }
  m["resolved"]["duration"] = pulses.duration();
  const Trajectory traj = as_config([&] {
    return evolve(basis_state(static_cast<int>(level)), pulses, rates, dt, sample_every(cfg));
  });
  out.write("trajectory.csv", [&](std::ostream& os) { csv::write_trajectory(os, traj); });
  m["results"]["final_populations"] = populations_json(populations(traj.states.back()));
  m["results"]["physicality"] = physicality_json(traj);
  m["results"]["samples"] = traj.size();
  log << "simulate: " << traj.size() << " samples over " << pulses.duration() << " us\n";
}

void run_feasibility(const RunConfig& cfg, ControlMode mode, Outputs& out, json& m,
                     std::ostream& log) {
  const DecoherenceRates rates = config_rates(cfg);
  ScanOptions opts;
  opts.design = config_design(cfg);
  opts.grid_step = cfg.positive("grid_step");
  const long long threads = cfg.integer("threads");
  if (threads < 0) throw Error(ErrorCode::ConfigError, "threads must be >= 0");
  opts.threads = static_cast<unsigned>(threads);
  m["resolved"]["threads"] = scan_threads(opts.threads);

  std::vector<double> tfs = cfg.number_list("feasibility.t_f");
  for (double tf : tfs) {
    if (!(tf > 0.0)) throw Error(ErrorCode::ConfigError, "feasibility.t_f entries must be positive");
  }
  std::sort(tfs.begin(), tfs.end());
  tfs.erase(std::unique(tfs.begin(), tfs.end()), tfs.end());

  std::vector<FeasibilityMap> maps;
  json regions = json::array();
  for (double tf : tfs) {
    FeasibilityMap map = as_config([&] {
      return mode == ControlMode::population ? population_feasible_region(tf, rates, opts)
                                             : coherence_feasible_region(tf, rates, opts);
    });
    const std::string name = "region_tf" + csv::shortest(tf) + ".csv";
    out.write(name, [&](std::ostream& os) { csv::write_feasibility(os, map); });
    std::size_t in_region = 0;
    for (const auto& c : map.cells) in_region += c.reason != Infeasibility::constraint;
    regions.push_back({{"t_f", tf},
                       {"file", name},
                       {"cells", map.cells.size()},
                       {"within_constraints", in_region},
                       {"feasible", map.feasible_count()}});
    log << "feasibility t_f = " << tf << " us: " << map.feasible_count() << " of " << in_region
        << " admissible cells feasible\n";
    maps.push_back(std::move(map));
  }
  json inclusion = json::array();
  for (std::size_t k = 0; k + 1 < maps.size(); ++k) {
    const auto violations = inclusion_violations(maps[k], maps[k + 1]);
    json cells = json::array();
    for (const auto& c : violations) cells.push_back(json::array({c.x, c.y}));
    inclusion.push_back({{"inner_t_f", tfs[k]},
                         {"outer_t_f", tfs[k + 1]},
                         {"holds", violations.empty()},
                         {"violations", violations.size()},
                         {"violating_cells", cells}});
  }
  m["results"]["regions"] = regions;
  m["results"]["inclusion"] = inclusion;
}

DensityParams random_family_state(std::uint64_t seed) {
  // Pure state with random amplitudes and phases constrained to the family.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double a0 = g(rng), a1 = g(rng), a2 = g(rng);
  const double n = std::sqrt(a0 * a0 + a1 * a1 + a2 * a2);
  a0 /= n;
  a1 /= n;
  a2 /= n;
  // psi = (a2, i a1, a0) in the {|2>,|1>,|0>} ordering reproduces the
  // family's phase pattern with real a_k.
  return {a1 * a1, a2 * a2, a1 * a2, a2 * a0, -a1 * a0};
}

void run_tomo(const RunConfig& cfg, Outputs& out, json& m, std::ostream& log) {
  const CalibrationMatrix f =
      cfg.get("tomo.calibration").empty()
          ? CalibrationMatrix::reference()
          : read_file<CalibrationMatrix>(existing_file(cfg, "tomo.calibration"),
                                         [](std::istream& in) { return csv::read_calibration(in); });
  const bool clip = cfg.integer("tomo.clip") != 0;

  DiagonalReads measured;
  std::optional<DensityParams> truth;
  if (cfg.get("tomo.reads").empty()) {
    const long long seed = cfg.integer("seed");
    DensityParams p;
    if (seed != 0) {
      p = random_family_state(static_cast<std::uint64_t>(seed));
    } else {
      p = {cfg.number("state.f1"), cfg.number("state.f2"), cfg.number("state.h1"),
           cfg.number("state.h2"), cfg.number("state.h3")};
    }
    const DensityMatrix rho = params_to_matrix(p);
    if (!physicality_check(rho).ok) {
      throw Error(ErrorCode::ConfigError, "state.* does not describe a physical density matrix");
    }
    const DiagonalReads ideal = tomo_rotations(rho);
    for (std::size_t s = 0; s < 4; ++s) measured.setting[s] = f.apply(ideal.setting[s]);
    truth = p;
    m["resolved"]["reads"] = seed != 0 ? "random state" : "state.*";
  } else {
    measured = read_file<DiagonalReads>(existing_file(cfg, "tomo.reads"),
                                        [](std::istream& in) { return csv::read_reads(in); });
    m["resolved"]["reads"] = cfg.get("tomo.reads");
  }
  out.write("reads.csv", [&](std::ostream& os) { csv::write_reads(os, measured); });
  out.write("calibration.txt", [&](std::ostream& os) { csv::write_calibration(os, f); });

  const DiagonalReads corrected = calibrate(measured, f, clip);
  out.write("reads_calibrated.csv", [&](std::ostream& os) { csv::write_reads(os, corrected); });
  const Coherences c = reconstruct_coherences(corrected);
  out.write("coherences.csv", [&](std::ostream& os) {
    os << "h1,h2,h3\n"
       << csv::shortest(c.h1) << ',' << csv::shortest(c.h2) << ',' << csv::shortest(c.h3) << '\n';
  });
  m["results"]["h1"] = c.h1;
  m["results"]["h2"] = c.h2;
  m["results"]["h3"] = c.h3;
  m["results"]["calibration_condition_number"] = f.condition_number();
  if (truth) {
    m["results"]["true_state"] = {{"f1", truth->f1}, {"f2", truth->f2}, {"h1", truth->h1},
                                  {"h2", truth->h2}, {"h3", truth->h3}};
    m["results"]["max_reconstruction_error"] =
        std::max({std::abs(c.h1 - truth->h1), std::abs(c.h2 - truth->h2),
                  std::abs(c.h3 - truth->h3)});
  }
  log << "tomo: h1 = " << c.h1 << ", h2 = " << c.h2 << ", h3 = " << c.h3 << '\n';
}

void run_qb(const RunConfig& cfg, Outputs& out, json& m, std::ostream& log) {
  QBConfig q;
  q.omega10 = cfg.number("qb.omega10");
  q.charge_level = cfg.number("qb.charge_level");
  q.residual_level = cfg.number("qb.residual_level");
  q.t_charge = cfg.positive("qb.t_charge");
  q.t_store = cfg.positive("qb.t_store");
  q.t_discharge = cfg.positive("qb.t_discharge");
  const double t1 = cfg.positive("rates.t1_01");
  const double t2 = cfg.positive("rates.t2_01");
  q.Gamma1 = 1.0 / t1;
  q.gamma1 = 2.0 / t2 - q.Gamma1;
  as_config([&] { validate(q); return 0; });
  const DesignOptions opts = config_design(cfg);

  const QBResult r = as_config([&] { return try_qb_scenario(q, opts); });
  m["resolved"]["rates"] = rates_json(q.rates());
  m["results"] = report_json(r.report);
  out.write("pulses.csv", [&](std::ostream& os) { csv::write_pulses(os, r.pulses); });
  if (!r.report.feasible()) {
    throw Error(ErrorCode::InfeasibleTarget, "battery profile infeasible [" +
                                                 std::string(to_string(r.report.reason)) +
                                                 "]: " + r.report.detail);
  }
  out.write("trajectory.csv", [&](std::ostream& os) { csv::write_trajectory(os, r.trajectory); });
  out.write("energy.csv", [&](std::ostream& os) { csv::write_energy(os, r.energy); });

  double hold_dev = 0.0;
  for (const auto& e : r.energy) {
    if (e.t >= q.store_begin() && e.t <= q.store_end()) {
      hold_dev = std::max(hold_dev, std::abs(e.p1 - q.charge_level) / q.charge_level);
    }
  }
  const double retention = qb_free_storage_retention(q);
  m["results"]["hold_relative_deviation"] = hold_dev;
  m["results"]["free_decay_loss"] = 1.0 - retention;
  m["results"]["plateau_energy"] = q.omega10 * q.charge_level;
  m["results"]["physicality"] = physicality_json(r.trajectory);
  log << "qb: hold deviation " << hold_dev * 100.0 << "%, free-decay loss "
      << (1.0 - retention) * 100.0 << "%\n";
}

json base_manifest(const RunConfig& cfg) {
  json m;
  m["mode"] = cfg.get("mode");
  m["config"] = cfg.values();
  m["resolved"] = json::object();
  m["resolved"]["dt"] = cfg.number("dt");
  m["resolved"]["omega_cap"] = cfg.number("omega_cap");
  m["resolved"]["t_f"] = cfg.number("t_f");
  m["resolved"]["rates"] = rates_json(config_rates(cfg));
  m["results"] = json::object();
  return m;
}

void write_manifest(Outputs& out, json& m) {
  out.write("run.cfg", [&](std::ostream& os) {
    RunConfig rerun;
    for (const auto& [k, v] : m["config"].items()) rerun.set(k, v.get<std::string>());
    os << rerun.to_text();
  });
  m["outputs"] = out.files();
  m["outputs"].push_back("manifest.json");
  out.write("manifest.json", [&](std::ostream& os) { os << m.dump(2) << '\n'; });
}

}  // namespace

json run(const RunConfig& config, std::ostream& log) {
  const std::string mode = config.get("mode");
  json m = base_manifest(config);
  Outputs out(config.get("out"));
  try {
    if (mode == "design-pop") {
      run_design_pop(config, out, m, log);
    } else if (mode == "design-coh") {
      run_design_coh(config, out, m, log);
    } else if (mode == "simulate") {
      run_simulate(config, out, m, log);
    } else if (mode == "feasibility-pop") {
      run_feasibility(config, ControlMode::population, out, m, log);
    } else if (mode == "feasibility-coh") {
      run_feasibility(config, ControlMode::coherence, out, m, log);
    } else if (mode == "tomo") {
      run_tomo(config, out, m, log);
    } else if (mode == "qb") {
      run_qb(config, out, m, log);
    } else {
      throw Error(ErrorCode::ConfigError, "unknown mode '" + mode + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InfeasibleTarget) {
      m["error"] = {{"category", "InfeasibleTarget"}, {"message", e.what()}};
      write_manifest(out, m);
    }
    throw;
  }
  write_manifest(out, m);
  return m;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse-engineered pulse design and verification for driven qutrits"};
  app.set_help_flag("-h,--help", "Show help");

  std::string config_path;
  std::vector<std::string> assignments;
  bool print_config = false;
  std::map<std::string, std::string> flag_values;
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--mode", "mode"},           {"--out", "out"},
      {"--dt", "dt"},               {"--omega-cap", "omega_cap"},
      {"--grid-step", "grid_step"}, {"--tf", "t_f"},
      {"--target-p1", "target.p1"}, {"--target-p2", "target.p2"},
      {"--target-h2", "target.h2"}, {"--target-h3", "target.h3"},
      {"--seed", "seed"},
  };

  app.add_option("--config", config_path, "Config file (key = value lines)");
  for (const auto& [flag, key] : flags) {
    app.add_option(flag, flag_values[key], "Sets " + key);
  }
  app.add_option("--set", assignments, "Override any config key: key=value");
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: ConfigError: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.merge_file(config_path);
    for (const auto& [flag, key] : flags) {
      if (app.count(flag) > 0) cfg.set(key, flag_values[key]);
    }
    for (const auto& a : assignments) cfg.set_assignment(a);
    if (print_config) {
      out << cfg.to_text();
      return kOk;
    }
    const json m = run(cfg, out);
    out << "wrote " << m["outputs"].size() << " files to " << cfg.get("out") << '\n';
    return kOk;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::InvalidArgument:
        return kConfigError;
      case ErrorCode::InfeasibleTarget:
      case ErrorCode::DenominatorCollapse:
        return kInfeasible;
      case ErrorCode::IoError:
        return kIoError;
      default:
        return kFailure;
    }
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace pulseforge::cli
