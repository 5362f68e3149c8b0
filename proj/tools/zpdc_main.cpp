// zpdc: simulator and analytic calculator for threshold photodetection of
// parametric down-conversion light with an explicit zeropoint background.
//
// Verbs: analytic | mc | compare | histogram | feasibility | zpf-oracle.
// All outputs are deterministic: identical invocations give identical bytes.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zpdc/analytic.hpp"
#include "zpdc/config.hpp"
#include "zpdc/errors.hpp"
#include "zpdc/feasibility.hpp"
#include "zpdc/field.hpp"
#include "zpdc/io.hpp"
#include "zpdc/mc.hpp"
#include "zpdc/mode_grid.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_path; // empty = stdout
  std::string format = "csv";
  std::string scenario = "joint";
  long long trials = 0; // 0 = config n_trials
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;
  std::vector<std::string> sets;
  double strictness = 10.0;
  std::string sweep; // feasibility: LO:HI:N for tau_coherence
  std::string trace_path;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_mc_flags,
                bool needs_scenario = true) {
  cmd->add_option("--config", a.config_path, "config JSON file")->required();
  cmd->add_option("--output", a.output_path, "output path (default stdout)");
  cmd->add_option("--format", a.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--set", a.sets,
                  "override KEY=VALUE (config keys; analytic also accepts "
                  "m,x,gamma,m2,x2,gamma2,rho_c)");
  if (needs_mc_flags) {
    if (needs_scenario)
      cmd->add_option("--scenario", a.scenario, "zpf|single|joint")
          ->check(CLI::IsMember({"zpf", "single", "joint"}));
    cmd->add_option("--trials", a.trials, "number of windows");
    cmd->add_option("--seed", a.seed, "stream seed")
        ->each([&a](const std::string&) { a.seed_given = true; });
    cmd->add_option("--workers", a.workers,
                    "worker threads (0 = auto); never changes results");
  }
}

struct AnalyticOverrides {
  std::map<std::string, double> values;
};

bool is_analytic_key(const std::string& key) {
  static const char* keys[] = {"m", "x", "gamma", "m2", "x2", "gamma2",
                               "rho_c"};
  for (const char* k : keys)
    if (key == k) return true;
  return false;
}

zpdc::ExperimentConfig load_with_overrides(const CommonArgs& a,
                                           AnalyticOverrides* extra) {
  zpdc::ExperimentConfig cfg = zpdc::load_config(a.config_path);
  for (const std::string& kv : a.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw zpdc::ConfigError(kv, "--set expects KEY=VALUE");
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    if (extra && is_analytic_key(key)) {
      double v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size())
        throw zpdc::ConfigError(key, "cannot parse numeric value '" + value + "'");
      extra->values[key] = v;
      continue;
    }
    zpdc::apply_override(cfg, key, value);
  }
  return cfg;
}

void emit(const CommonArgs& a, const std::string& content) {
  if (a.output_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
  } else {
    zpdc::io::write_atomic(a.output_path, content);
  }
}

void print_diagnostics(const zpdc::ExperimentConfig& cfg) {
  for (const auto& d : zpdc::validate_config(cfg))
    std::fprintf(stderr, "zpdc: note: %s: measured %g, required %g (%s)\n",
                 d.condition.c_str(), d.measured, d.required,
                 d.message.c_str());
}

int run_analytic(const CommonArgs& a, const std::string& emit_golden) {
  AnalyticOverrides extra;
  zpdc::ExperimentConfig cfg = load_with_overrides(a, &extra);
  print_diagnostics(cfg);
  if (!emit_golden.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(emit_golden);
    zpdc::io::write_atomic(fs::path(emit_golden) / "p_single_grid.csv",
                           zpdc::io::golden_single_csv());
    zpdc::io::write_atomic(fs::path(emit_golden) / "p_joint.csv",
                           zpdc::io::golden_joint_csv());
    return 0;
  }
  zpdc::DerivedParams d = zpdc::derive_params(cfg);

  zpdc::analytic::JointParams p;
  p.d1.m = cfg.I_m_margin;
  p.d1.x = zpdc::field::expected_signal_intensity(cfg, d) / d.sigma0;
  p.d1.gamma = cfg.zeta_gain * d.sigma0;
  p.d2 = p.d1;
  p.rho_c = zpdc::mc::grid_prediction(cfg, {zpdc::mc::ScenarioKind::Joint,
                                            static_cast<std::size_t>(-1)})
                .rho_c;
  auto get = [&](const char* k, double v) {
    auto it = extra.values.find(k);
    return it == extra.values.end() ? v : it->second;
  };
  p.d1.m = get("m", p.d1.m);
  p.d1.x = get("x", p.d1.x);
  p.d1.gamma = get("gamma", p.d1.gamma);
  p.d2.m = get("m2", p.d1.m);
  p.d2.x = get("x2", p.d1.x);
  p.d2.gamma = get("gamma2", p.d1.gamma);
  p.rho_c = get("rho_c", p.rho_c);

  zpdc::analytic::AnalyticReport report = zpdc::analytic::analytic_report(cfg, p);
  zpdc::io::Provenance prov{"analytic", &cfg, cfg.seed, 0, ""};
  emit(a, zpdc::io::analytic_json(prov, p, report));
  return 0;
}

int run_mc(const CommonArgs& a) {
  zpdc::ExperimentConfig cfg = load_with_overrides(a, nullptr);
  print_diagnostics(cfg);
  zpdc::mc::Scenario sc{zpdc::mc::scenario_from_name(a.scenario),
                        static_cast<std::size_t>(-1)};
  long long trials = a.trials > 0 ? a.trials : cfg.n_trials;
  std::uint64_t seed = a.seed_given ? a.seed : cfg.seed;
  zpdc::mc::RunOptions opts{a.workers, a.trace_path};
  auto rates = zpdc::mc::run_trials(cfg, sc, trials, seed, opts);
  zpdc::io::Provenance prov{"mc", &cfg, seed, trials, a.scenario};
  emit(a, a.format == "json" ? zpdc::io::rates_json(prov, rates)
                             : zpdc::io::rates_csv(prov, rates));
  return 0;
}

int run_compare(const CommonArgs& a) {
  zpdc::ExperimentConfig cfg = load_with_overrides(a, nullptr);
  print_diagnostics(cfg);
  zpdc::mc::Scenario sc{zpdc::mc::scenario_from_name(a.scenario),
                        static_cast<std::size_t>(-1)};
  long long trials = a.trials > 0 ? a.trials : cfg.n_trials;
  std::uint64_t seed = a.seed_given ? a.seed : cfg.seed;
  zpdc::mc::RunOptions opts{a.workers, a.trace_path};
  auto rows = zpdc::mc::compare(cfg, sc, trials, seed, opts);
  zpdc::io::Provenance prov{"compare", &cfg, seed, trials, a.scenario};
  emit(a, a.format == "json" ? zpdc::io::comparison_json(prov, rows)
                             : zpdc::io::comparison_csv(prov, rows));
  for (const auto& r : rows)
    if (!r.pass) return 3;
  return 0;
}

int run_histogram(const CommonArgs& a, int bins) {
  zpdc::ExperimentConfig cfg = load_with_overrides(a, nullptr);
  print_diagnostics(cfg);
  long long trials = a.trials > 0 ? a.trials : cfg.n_trials;
  std::uint64_t seed = a.seed_given ? a.seed : cfg.seed;
  zpdc::mc::RunOptions opts{a.workers, ""};
  zpdc::mc::Histogram h = zpdc::mc::histogram_u(cfg, trials, seed, bins, opts);
  zpdc::io::Provenance prov{"histogram", &cfg, seed, trials, ""};
  emit(a, zpdc::io::histogram_csv(prov, h));
  return 0;
}

int run_feasibility(const CommonArgs& a) {
  zpdc::ExperimentConfig cfg = load_with_overrides(a, nullptr);
  print_diagnostics(cfg);
  zpdc::io::Provenance prov{"feasibility", &cfg, cfg.seed, 0, ""};
  if (!a.sweep.empty()) {
    double lo = 0, hi = 0;
    int n = 0;
    if (std::sscanf(a.sweep.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3)
      throw zpdc::ConfigError("sweep", "expects LO:HI:N for tau_coherence");
    auto sweep = zpdc::feas::sweep_tau(cfg, lo, hi, n, a.strictness);
    emit(a, zpdc::io::feasibility_sweep_csv(prov, sweep));
    return 0;
  }
  auto report = zpdc::feas::minimal_bounds(cfg, a.strictness);
  if (a.format == "json")
    emit(a, zpdc::io::feasibility_json(prov, report));
  else
    emit(a, zpdc::io::feasibility_table(report));
  return 0;
}

int run_zpf_oracle(const CommonArgs& a) {
  zpdc::ExperimentConfig cfg = load_with_overrides(a, nullptr);
  zpdc::ModeGrid grid = zpdc::build_mode_grid(cfg);
  std::vector<double> omegas = {grid.frequencies.front(),
                                grid.frequencies[grid.size() / 2],
                                grid.frequencies.back()};
  zpdc::io::Provenance prov{"zpf-oracle", &cfg, cfg.seed, 0, ""};
  emit(a, zpdc::io::zpf_oracle_csv(prov, cfg, omegas));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"threshold-detection simulator for parametric down-conversion "
               "with a zeropoint background"};
  app.require_subcommand(1);

  CommonArgs a;
  int bins = 50;

  std::string emit_golden;
  CLI::App* analytic = app.add_subcommand("analytic", "closed-form report");
  add_common(analytic, a, false);
  analytic->add_option("--emit-golden", emit_golden,
                       "regenerate the detection-probability golden CSVs "
                       "into DIR and exit");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimators");
  add_common(mc, a, true);
  mc->add_option("--trace", a.trace_path, "per-trial CSV trace file");

  CLI::App* compare =
      app.add_subcommand("compare", "Monte Carlo vs analytic, z-scored");
  add_common(compare, a, true);

  CLI::App* histogram =
      app.add_subcommand("histogram", "binned density of u with expected curve");
  add_common(histogram, a, true, /*needs_scenario=*/false);
  histogram->add_option("--bins", bins, "number of bins (>= 10)");

  CLI::App* feasibility =
      app.add_subcommand("feasibility", "minimal intensity and rate bounds");
  add_common(feasibility, a, false);
  feasibility->add_option("--strictness", a.strictness,
                          "factor k standing in for 'much greater than'");
  feasibility->add_option("--sweep", a.sweep,
                          "sweep tau_coherence, LO:HI:N, emits CSV");

  CLI::App* zpf =
      app.add_subcommand("zpf-oracle", "regenerate element-intensity golden CSV");
  add_common(zpf, a, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(analytic)) return run_analytic(a, emit_golden);
    if (app.got_subcommand(mc)) return run_mc(a);
    if (app.got_subcommand(compare)) return run_compare(a);
    if (app.got_subcommand(histogram)) return run_histogram(a, bins);
    if (app.got_subcommand(feasibility)) return run_feasibility(a);
    if (app.got_subcommand(zpf)) return run_zpf_oracle(a);
  } catch (const zpdc::ConvergenceError& e) {
    std::fprintf(stderr, "zpdc: numerical non-convergence: %s\n", e.what());
    return 2;
  } catch (const zpdc::ConfigError& e) {
    std::fprintf(stderr, "zpdc: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "zpdc: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
