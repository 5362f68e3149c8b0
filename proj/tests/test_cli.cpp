#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* p = std::getenv("ZPDC_CLI");
  REQUIRE_MESSAGE(p != nullptr, "ZPDC_CLI must point at the zpdc binary");
  return p;
}

int run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

fs::path write_config() {
  fs::path p = fs::temp_directory_path() / "zpdc_cli_cfg.json";
  std::ofstream out(p, std::ios::trunc);
  out << R"({"lambda_center": 700e-9, "T_window": 1e-8,
             "omega_min": 2689422845967496.0,
             "omega_max": 2692438774914942.0,
             "tau_coherence": 2.0833333333333334e-12,
             "g_coupling": 0.25, "I_m_margin": 1.0, "zeta_gain": 1.0,
             "seed": 9})";
  return p;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  CHECK(run("definitely-not-a-verb") == 1);
  CHECK(run("mc") == 1);                         // missing --config
  CHECK(run("mc --config /does/not/exist.json") == 1);
}

TEST_CASE("unknown --set key exits 1") {
  auto cfg = write_config();
  CHECK(run("mc --config " + cfg.string() + " --set nope=3 --trials 10") == 1);
}

TEST_CASE("analytic verb emits the documented JSON fields") {
  auto cfg = write_config();
  fs::path out = fs::temp_directory_path() / "zpdc_analytic.json";
  int rc = run("analytic --config " + cfg.string() +
               " --set x=6 --set m=3 --set gamma=0.01 --output " +
               out.string());
  CHECK(rc == 0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["report"].contains("p_single_model"));
  CHECK(j["report"].contains("p_single_linear"));
  CHECK(j["params"]["x"] == 6.0);
  double p = j["report"]["p_single_model"].get<double>();
  CHECK(p > 0.055);
  CHECK(p < 0.060);
  fs::remove(out);
}

TEST_CASE("byte-identical outputs: reruns and worker counts") {
  auto cfg = write_config();
  fs::path a = fs::temp_directory_path() / "zpdc_cmp_a.csv";
  fs::path b = fs::temp_directory_path() / "zpdc_cmp_b.csv";
  std::string common = "compare --config " + cfg.string() +
                       " --scenario joint --trials 3000 --seed 7 ";
  CHECK(run(common + "--workers 1 --output " + a.string()) == 0);
  CHECK(run(common + "--workers 8 --output " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  // Header embeds the resolved config and seed (reconstructibility).
  std::string text = slurp(a);
  CHECK(text.find("# seed: 7") != std::string::npos);
  CHECK(text.find("\"g_coupling\":0.25") != std::string::npos);
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("mc json format") {
  auto cfg = write_config();
  fs::path out = fs::temp_directory_path() / "zpdc_mc.json";
  CHECK(run("mc --config " + cfg.string() +
            " --scenario single --trials 500 --seed 3 --format json "
            "--output " + out.string()) == 0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["seed"] == 3); // the --seed flag overrides the config seed
  CHECK(j["results"].is_array());
  fs::remove(out);
}

TEST_CASE("feasibility sweep emits csv rows") {
  auto cfg = write_config();
  fs::path out = fs::temp_directory_path() / "zpdc_sweep.csv";
  CHECK(run("feasibility --config " + cfg.string() +
            " --sweep 1e-13:4e-12:10 --output " + out.string()) == 0);
  std::string text = slurp(out);
  CHECK(text.find("tau_coherence,I_s_min") != std::string::npos);
  int rows = 0;
  for (char c : text)
    if (c == '\n') ++rows;
  CHECK(rows >= 12); // header block + 10 data rows
  fs::remove(out);
}

TEST_CASE("zpf-oracle verb emits ratio rows near 1") {
  fs::path cfg = fs::temp_directory_path() / "zpdc_oracle_cfg.json";
  {
    std::ofstream out(cfg, std::ios::trunc);
    // Short detector keeps the oscillatory integral cheap.
    out << R"({"lambda_center": 700e-9, "detector_L": 1e-3,
               "detector_R": 1e-6, "T_window": 1e-8})";
  }
  fs::path out = fs::temp_directory_path() / "zpdc_oracle.csv";
  CHECK(run("zpf-oracle --config " + cfg.string() + " --output " +
            out.string()) == 0);
  std::string text = slurp(out);
  CHECK(text.find("omega,closed,quadrature,achieved_tol,ratio") !=
        std::string::npos);
  int data_rows = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'o') continue;
    ++data_rows;
    double ratio = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(ratio > 0.9);
    CHECK(ratio <= 1.0);
  }
  CHECK(data_rows == 3);
  fs::remove(out);
  fs::remove(cfg);
}

TEST_CASE("histogram verb") {
  auto cfg = write_config();
  fs::path out = fs::temp_directory_path() / "zpdc_hist.csv";
  CHECK(run("histogram --config " + cfg.string() +
            " --trials 2000 --bins 24 --seed 5 --output " + out.string()) ==
        0);
  std::string text = slurp(out);
  CHECK(text.find("bin_left,bin_right,density,expected_density") !=
        std::string::npos);
  fs::remove(out);
}

} // TEST_SUITE
