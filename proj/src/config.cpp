#include "zpdc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include <json.hpp>

#include "zpdc/errors.hpp"

namespace zpdc {

using nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

struct FieldDesc {
  std::function<void(ExperimentConfig&, const nlohmann::json&)> set;
  std::function<ordered_json(const ExperimentConfig&)> get;
};

const std::map<std::string, FieldDesc>& field_table() {
  static const std::map<std::string, FieldDesc> table = {
      {"lambda_center",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.lambda_center = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.lambda_center); }}},
      {"delta_lambda",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.delta_lambda = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.delta_lambda); }}},
      {"omega_min",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.omega_min = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.omega_min); }}},
      {"omega_max",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.omega_max = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.omega_max); }}},
      {"T_window",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.T_window = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.T_window); }}},
      {"tau_coherence",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.tau_coherence = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.tau_coherence); }}},
      {"detector_R",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.detector_R = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.detector_R); }}},
      {"detector_L",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.detector_L = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.detector_L); }}},
      {"g_coupling",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.g_coupling = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.g_coupling); }}},
      {"eta",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.eta = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.eta); }}},
      {"zeta_gain",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.zeta_gain = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.zeta_gain); }}},
      {"I_m_margin",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.I_m_margin = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.I_m_margin); }}},
      {"lens_Rl",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.lens_Rl = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.lens_Rl); }}},
      {"lens_f",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.lens_f = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.lens_f); }}},
      {"source_distance_d",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.source_distance_d = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.source_distance_d); }}},
      {"crystal_radius_Rc",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.crystal_radius_Rc = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.crystal_radius_Rc); }}},
      {"omega_pump",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.omega_pump = v.get<double>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.omega_pump); }}},
      {"n_trials",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.n_trials = v.get<long long>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.n_trials); }}},
      {"seed",
       {[](ExperimentConfig& c, const nlohmann::json& v) { c.seed = v.get<std::uint64_t>(); },
        [](const ExperimentConfig& c) { return ordered_json(c.seed); }}},
  };
  return table;
}

void require_positive(double v, const char* key) {
  if (!std::isfinite(v) || v <= 0)
    throw ConfigError(key, "must be a finite positive number, got " +
                               std::to_string(v));
}

} // namespace

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  // Band defaults centered on 2 pi c / lambda with width 2 pi c dl / lambda^2.
  if (c.omega_min == 0 && c.omega_max == 0) {
    double wc = kTwoPi * constants::c / c.lambda_center;
    double dw = kTwoPi * constants::c * c.delta_lambda /
                (c.lambda_center * c.lambda_center);
    c.omega_min = wc - dw / 2;
    c.omega_max = wc + dw / 2;
  }
  if (c.tau_coherence == 0) c.tau_coherence = kTwoPi / (c.omega_max - c.omega_min);
  // Exact matching condition: the pump closes every conjugate pair. An
  // explicit value is kept here and checked against the band later.
  if (c.omega_pump == 0) c.omega_pump = c.omega_min + c.omega_max;
  return c;
}

double small_radius_bound(const ExperimentConfig& cfg) {
  return std::sqrt(cfg.lambda_center * cfg.detector_L /
                   (8.0 * constants::pi * constants::pi));
}

void check_config(const ExperimentConfig& cfg) {
  require_positive(cfg.lambda_center, "lambda_center");
  require_positive(cfg.delta_lambda, "delta_lambda");
  require_positive(cfg.omega_min, "omega_min");
  require_positive(cfg.omega_max, "omega_max");
  if (cfg.omega_min >= cfg.omega_max)
    throw ConfigError("omega_min", "omega_min must be below omega_max");
  require_positive(cfg.T_window, "T_window");
  require_positive(cfg.tau_coherence, "tau_coherence");
  if (cfg.T_window / cfg.tau_coherence < 10.0)
    throw ConfigError("tau_coherence",
                      "T_window / tau_coherence must be >= 10, got " +
                          std::to_string(cfg.T_window / cfg.tau_coherence));
  require_positive(cfg.detector_R, "detector_R");
  require_positive(cfg.detector_L, "detector_L");
  if (!std::isfinite(cfg.g_coupling) || cfg.g_coupling < 0 ||
      cfg.g_coupling * cfg.g_coupling >= 1.0)
    throw ConfigError("g_coupling", "requires 0 <= g and g^2 < 1");
  if (cfg.g_coupling * cfg.g_coupling > 0.1)
    std::fprintf(stderr, "zpdc: warning: g_coupling^2 = %g exceeds 0.1\n",
                 cfg.g_coupling * cfg.g_coupling);
  if (!std::isfinite(cfg.eta) || cfg.eta <= 0 || cfg.eta > 1)
    throw ConfigError("eta", "must lie in (0, 1], got " + std::to_string(cfg.eta));
  require_positive(cfg.zeta_gain, "zeta_gain");
  if (!std::isfinite(cfg.I_m_margin) || cfg.I_m_margin <= 0)
    throw ConfigError("I_m_margin", "threshold must sit above the mean "
                                    "zeropoint intensity (margin > 0)");
  require_positive(cfg.lens_Rl, "lens_Rl");
  require_positive(cfg.lens_f, "lens_f");
  require_positive(cfg.source_distance_d, "source_distance_d");
  require_positive(cfg.crystal_radius_Rc, "crystal_radius_Rc");
  double pump = cfg.omega_min + cfg.omega_max;
  if (cfg.omega_pump != 0 &&
      std::abs(cfg.omega_pump - pump) > 1e-9 * pump)
    throw ConfigError("omega_pump",
                      "must equal omega_min + omega_max (perfect matching)");
  if (cfg.n_trials < 1)
    throw ConfigError("n_trials", "must be >= 1");
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("", "config must be a flat JSON object");

  ExperimentConfig cfg;
  // Mark derivable fields unset; explicit values below override.
  cfg.omega_min = cfg.omega_max = cfg.tau_coherence = cfg.omega_pump = 0;
  const auto& table = field_table();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    auto f = table.find(it.key());
    if (f == table.end())
      throw ConfigError(it.key(), "unknown configuration key");
    if (!it.value().is_number())
      throw ConfigError(it.key(), "value must be numeric");
    try {
      f->second.set(cfg, it.value());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(it.key(), e.what());
    }
  }
  // The band must be given whole or not at all.
  bool has_min = doc.contains("omega_min"), has_max = doc.contains("omega_max");
  if (has_min != has_max)
    throw ConfigError(has_min ? "omega_max" : "omega_min",
                      "missing required field (band needs both edges)");
  cfg = cfg.resolved();
  check_config(cfg);
  cfg.omega_pump = cfg.omega_min + cfg.omega_max; // exact after validation
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("", "cannot open config file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  const auto& table = field_table();
  auto f = table.find(key);
  if (f == table.end()) throw ConfigError(key, "unknown configuration key");
  double v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError(key, "cannot parse numeric value '" + value + "'");
  f->second.set(cfg, nlohmann::json(v));
  if (key == "omega_min" || key == "omega_max") cfg.omega_pump = 0;
  cfg = cfg.resolved();
  check_config(cfg);
  cfg.omega_pump = cfg.omega_min + cfg.omega_max;
}

std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  double r_bound = small_radius_bound(cfg);
  if (!(cfg.detector_R < r_bound))
    out.push_back({"small_radius", cfg.detector_R, r_bound,
                   "detector_R must stay below sqrt(lambda L / 8 pi^2) for "
                   "the transverse factor to be ~1"});
  double coh_lhs = cfg.source_distance_d * cfg.lambda_center;
  double coh_rhs = cfg.lens_Rl * cfg.crystal_radius_Rc;
  if (!(coh_lhs >= coh_rhs))
    out.push_back({"spatial_coherence", coh_lhs, coh_rhs,
                   "d lambda >= Rl Rc required for spatial coherence on the "
                   "lens"});
  if (!(cfg.I_m_margin > 0))
    out.push_back({"threshold_margin", cfg.I_m_margin, 0.0,
                   "threshold must sit strictly above the mean zeropoint "
                   "intensity"});
  double ratio = cfg.T_window / cfg.tau_coherence;
  if (!(ratio >= 10.0))
    out.push_back({"window_ratio", ratio, 10.0,
                   "T_window / tau_coherence must be >= 10"});
  return out;
}

DerivedParams derive_params(const ExperimentConfig& cfg) {
  DerivedParams d;
  d.omega_bar = 0.5 * (cfg.omega_max + cfg.omega_min);
  d.delta_omega = cfg.omega_max - cfg.omega_min;
  d.delta_omega_element = kTwoPi / cfg.T_window;
  d.n_elements = std::llround(cfg.T_window / cfg.tau_coherence);
  d.I0_bar = constants::hbar * d.omega_bar * d.omega_bar * d.delta_omega /
             (8.0 * constants::pi * constants::c * cfg.detector_L);
  d.s_ratio = std::sqrt(cfg.tau_coherence / cfg.T_window);
  d.sigma0 = d.I0_bar * d.s_ratio;
  d.I_m_abs = d.I0_bar + cfg.I_m_margin * d.sigma0;
  d.b_squared = constants::pi * constants::pi * std::pow(cfg.lens_Rl, 4) /
                (cfg.lambda_center * cfg.lambda_center * cfg.lens_f * cfg.lens_f);
  d.A_r = 2.0 * cfg.lens_Rl / cfg.lens_f;
  d.R_diffraction = 1.22 * cfg.lambda_center / d.A_r;
  return d;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  // Emit in declaration order so identical configs serialize identically.
  static const char* order[] = {
      "lambda_center", "delta_lambda", "omega_min", "omega_max", "T_window",
      "tau_coherence", "detector_R", "detector_L", "g_coupling", "eta",
      "zeta_gain", "I_m_margin", "lens_Rl", "lens_f", "source_distance_d",
      "crystal_radius_Rc", "omega_pump", "n_trials", "seed"};
  const auto& table = field_table();
  for (const char* key : order) j[key] = table.at(key).get(cfg);
  return j.dump();
}

} // namespace zpdc
