#include "zpdc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace zpdc::io {

using nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string header_comment(const Provenance& p) {
  std::string out;
  out += "# zpdc " + p.verb + " v" + kVersion + "\n";
  if (p.cfg) out += "# config: " + config_to_json(*p.cfg) + "\n";
  if (!p.scenario.empty()) out += "# scenario: " + p.scenario + "\n";
  if (p.trials > 0) out += "# trials: " + std::to_string(p.trials) + "\n";
  out += "# seed: " + std::to_string(p.seed) + "\n";
  return out;
}

namespace {

ordered_json provenance_json(const Provenance& p) {
  ordered_json j;
  j["artifact"] = std::string("zpdc ") + kVersion;
  j["verb"] = p.verb;
  if (p.cfg) j["config"] = nlohmann::ordered_json::parse(config_to_json(*p.cfg));
  if (!p.scenario.empty()) j["scenario"] = p.scenario;
  if (p.trials > 0) j["trials"] = p.trials;
  j["seed"] = p.seed;
  return j;
}

} // namespace

std::string rates_csv(const Provenance& p,
                      const std::vector<mc::RateEstimate>& rates) {
  std::string out = header_comment(p);
  out += "quantity,mean,std_error,n,seed\n";
  for (const auto& r : rates) {
    out += r.quantity + "," + format_double(r.mean) + "," +
           format_double(r.std_error) + "," + std::to_string(r.n) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

std::string rates_json(const Provenance& p,
                       const std::vector<mc::RateEstimate>& rates) {
  ordered_json j = provenance_json(p);
  ordered_json arr = ordered_json::array();
  for (const auto& r : rates) {
    ordered_json e;
    e["quantity"] = r.quantity;
    e["mean"] = r.mean;
    e["std_error"] = r.std_error;
    e["n"] = r.n;
    arr.push_back(e);
  }
  j["results"] = arr;
  return j.dump(2) + "\n";
}

std::string comparison_csv(const Provenance& p,
                           const std::vector<mc::ComparisonRow>& rows) {
  std::string out = header_comment(p);
  out += "quantity,mean,std_error,n,analytic,z\n";
  for (const auto& r : rows) {
    out += r.quantity + "," + format_double(r.mc.mean) + "," +
           format_double(r.mc.std_error) + "," + std::to_string(r.mc.n) + "," +
           format_double(r.analytic) + "," + format_double(r.z_score) + "\n";
  }
  return out;
}

std::string comparison_json(const Provenance& p,
                            const std::vector<mc::ComparisonRow>& rows) {
  ordered_json j = provenance_json(p);
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json e;
    e["quantity"] = r.quantity;
    e["mean"] = r.mc.mean;
    e["std_error"] = r.mc.std_error;
    e["n"] = r.mc.n;
    e["analytic"] = r.analytic;
    if (std::isnan(r.z_score))
      e["z"] = nullptr;
    else
      e["z"] = r.z_score;
    e["pass"] = r.pass;
    if (!r.note.empty()) e["note"] = r.note;
    arr.push_back(e);
  }
  j["results"] = arr;
  return j.dump(2) + "\n";
}

std::string histogram_csv(const Provenance& p, const mc::Histogram& h) {
  std::string out = header_comment(p);
  out += "# n: " + std::to_string(h.n) + "\n";
  out += "# underflow: " + std::to_string(h.underflow) +
         " overflow: " + std::to_string(h.overflow) + "\n";
  out += "# chi_square: " + format_double(h.chi_square) +
         " dof: " + std::to_string(h.dof) +
         " skewness: " + format_double(h.skewness) + "\n";
  out += "bin_left,bin_right,density,expected_density\n";
  for (std::size_t k = 0; k + 1 < h.edges.size(); ++k) {
    out += format_double(h.edges[k]) + "," + format_double(h.edges[k + 1]) +
           "," + format_double(h.density[k]) + "," +
           format_double(h.expected[k]) + "\n";
  }
  return out;
}

namespace {

ordered_json report_json(const feas::FeasibilityReport& r) {
  ordered_json e;
  e["b_squared"] = r.b_squared;
  e["A_r"] = r.A_r;
  e["R_diffraction_first"] = r.R_diffraction_first;
  e["R_diffraction_second"] = r.R_diffraction_second;
  e["I_s_min"] = r.I_s_min;
  e["I_in_min"] = r.I_in_min;
  e["rate_min_lens"] = r.rate_min_lens;
  e["rate_min_coherence"] = r.rate_min_coherence;
  e["strictness_k"] = r.strictness_k;
  e["I_s_min_strict"] = r.strictness_k * r.I_s_min;
  e["rate_min_lens_strict"] = r.strictness_k * r.rate_min_lens;
  e["rate_min_coherence_strict"] = r.strictness_k * r.rate_min_coherence;
  e["I_s_config"] = r.I_s_config;
  e["rate_config"] = r.rate_config;
  e["margin_I_s"] = r.margin_I_s;
  e["margin_rate_lens"] = r.margin_rate_lens;
  e["margin_rate_coherence"] = r.margin_rate_coherence;
  e["cond_signal_dominates"] = r.cond_signal_dominates;
  e["cond_spatial_coherence"] = r.cond_spatial_coherence;
  e["cond_small_radius"] = r.cond_small_radius;
  return e;
}

} // namespace

std::string feasibility_json(const Provenance& p,
                             const feas::FeasibilityReport& r) {
  ordered_json j = provenance_json(p);
  j["report"] = report_json(r);
  return j.dump(2) + "\n";
}

std::string feasibility_table(const feas::FeasibilityReport& r) {
  auto line = [](const std::string& k, const std::string& v) {
    std::string out = "  " + k;
    if (out.size() < 28) out.resize(28, ' ');
    return out + v + "\n";
  };
  std::string out = "feasibility report\n";
  out += line("lens gain b^2", format_double(r.b_squared));
  out += line("relative aperture A_r", format_double(r.A_r));
  out += line("R diffraction (1st ring)", format_double(r.R_diffraction_first) + " m  [84% of intensity]");
  out += line("R diffraction (2nd ring)", format_double(r.R_diffraction_second) + " m  [91% of intensity]");
  out += line("I_s bound (raw)", format_double(r.I_s_min) + " W/m^2");
  out += line("I_in bound (raw)", format_double(r.I_in_min) + " W/m^2");
  out += line("rate bound, lens form", format_double(r.rate_min_lens) + " 1/s");
  out += line("rate bound, coherence", format_double(r.rate_min_coherence) + " 1/s");
  out += line("strictness k", format_double(r.strictness_k));
  out += line("configured I_s", format_double(r.I_s_config) + " W/m^2");
  out += line("configured rate", format_double(r.rate_config) + " 1/s");
  out += line("margin I_s", format_double(r.margin_I_s));
  out += line("margin rate (lens)", format_double(r.margin_rate_lens));
  out += line("margin rate (coherence)", format_double(r.margin_rate_coherence));
  out += line("signal >> sigma0", r.cond_signal_dominates ? "yes" : "NO");
  out += line("spatial coherence", r.cond_spatial_coherence ? "yes" : "NO");
  out += line("small radius", r.cond_small_radius ? "yes" : "NO");
  return out;
}

std::string feasibility_sweep_csv(
    const Provenance& p,
    const std::vector<std::pair<double, feas::FeasibilityReport>>& sweep) {
  std::string out = header_comment(p);
  out += "tau_coherence,I_s_min,I_in_min,rate_min_lens,rate_min_coherence\n";
  for (const auto& [tau, r] : sweep) {
    out += format_double(tau) + "," + format_double(r.I_s_min) + "," +
           format_double(r.I_in_min) + "," + format_double(r.rate_min_lens) +
           "," + format_double(r.rate_min_coherence) + "\n";
  }
  return out;
}

std::string analytic_json(const Provenance& p,
                          const analytic::JointParams& params,
                          const analytic::AnalyticReport& r) {
  ordered_json j = provenance_json(p);
  ordered_json q;
  q["m"] = params.d1.m;
  q["x"] = params.d1.x;
  q["gamma"] = params.d1.gamma;
  q["m2"] = params.d2.m;
  q["x2"] = params.d2.x;
  q["gamma2"] = params.d2.gamma;
  q["rho_c"] = params.rho_c;
  j["params"] = q;
  ordered_json e;
  e["I0_bar"] = r.I0_bar;
  e["sigma0"] = r.sigma0;
  e["p_single_model"] = r.p_single;
  e["p_single_quadrature"] = r.p_single_quadrature;
  e["p_single_linear"] = r.p_single_linear_full;
  e["p_single_linear_limit"] = r.p_single_linear_limit;
  e["p_dark"] = r.p_dark;
  e["p_joint_model"] = r.p_joint;
  e["p_joint_linear"] = r.p_joint_lin;
  e["p_single_quantum"] = r.p_single_q;
  e["p_joint_quantum"] = r.p_joint_q;
  e["subzero_mass"] = r.subzero_mass;
  j["report"] = e;
  return j.dump(2) + "\n";
}

std::string golden_single_csv() {
  std::string out;
  out += "# single-detection probability on the acceptance grid\n";
  out += "# regenerated by: zpdc analytic --emit-golden DIR (quadrature "
         "oracle)\n";
  out += "m,x,gamma,p,abs_tol\n";
  for (double m : {2.0, 3.0, 5.0}) {
    for (double x : {4.0, 6.0, 10.0}) {
      for (double g : {0.003, 0.01, 0.03}) {
        double p = analytic::p_single_model_quadrature({m, x, g});
        char buf[96];
        std::snprintf(buf, sizeof buf, "%g,%g,%g,%.15e,1e-10\n", m, x, g, p);
        out += buf;
      }
    }
  }
  return out;
}

std::string golden_joint_csv() {
  std::string out;
  out += "# joint detection probability, symmetric arms m=3 x=6 gamma=0.01\n";
  out += "# regenerated by: zpdc analytic --emit-golden DIR (2-D adaptive "
         "quadrature)\n";
  out += "m,x,gamma,rho,p,abs_tol\n";
  for (double rho : {0.0, 0.2, 0.5, 0.8}) {
    double p =
        analytic::p_joint_model({{3, 6, 0.01}, {3, 6, 0.01}, rho}, 1e-11).value;
    char buf[96];
    std::snprintf(buf, sizeof buf, "3,6,0.01,%g,%.15e,5e-10\n", rho, p);
    out += buf;
  }
  return out;
}

std::string amplitudes_csv(long long trial, const field::AmplitudeSet& amps) {
  std::string out = "trial,beam,mode,re,im\n";
  for (int beam = 1; beam <= 2; ++beam) {
    const auto& v = beam == 1 ? amps.beam1 : amps.beam2;
    for (std::size_t j = 0; j < v.size(); ++j) {
      out += std::to_string(trial) + "," + std::to_string(beam) + "," +
             std::to_string(j) + "," + format_double(v[j].real()) + "," +
             format_double(v[j].imag()) + "\n";
    }
  }
  return out;
}

std::string zpf_oracle_csv(const Provenance& p, const ExperimentConfig& cfg,
                           const std::vector<double>& omegas) {
  std::string out = header_comment(p);
  out += "omega,closed,quadrature,achieved_tol,ratio\n";
  for (double w : omegas) {
    double closed = analytic::zpf_element_intensity(cfg, w,
                                                    analytic::Method::Closed);
    quad::Result info;
    double q = analytic::zpf_element_intensity(
        cfg, w, analytic::Method::Quadrature, &info);
    out += format_double(w) + "," + format_double(closed) + "," +
           format_double(q) + "," +
           format_double(info.abs_error / std::max(1e-300, std::abs(info.value))) +
           "," + format_double(q / closed) + "\n";
  }
  return out;
}

} // namespace zpdc::io
