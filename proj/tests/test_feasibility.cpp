#include <doctest.h>

#include <cmath>

#include "zpdc/feasibility.hpp"

using namespace zpdc;

namespace {

// Bench parameters: eta 0.1, 700 nm, 10 ns window, centimeter-fraction optics.
ExperimentConfig bench() {
  ExperimentConfig cfg = ExperimentConfig{}.resolved();
  cfg.eta = 0.1;
  cfg.lens_Rl = 2.5e-3;
  cfg.lens_f = 5e-3;
  cfg.detector_L = 5e-3;
  return cfg;
}

} // namespace

TEST_SUITE("feasibility") {

TEST_CASE("unit aperture puts the first ring at 1.22 lambda") {
  ExperimentConfig cfg = bench();
  cfg.lens_Rl = cfg.lens_f / 2; // A_r = 1
  auto ld = feas::lens_and_diffraction(cfg);
  CHECK(ld.R_first == doctest::Approx(1.22 * cfg.lambda_center).epsilon(1e-15));
  CHECK(ld.R_second == doctest::Approx(2.23 * cfg.lambda_center).epsilon(1e-15));
}

TEST_CASE("lens gain scales as Rl^4") {
  ExperimentConfig cfg = bench();
  double b1 = feas::lens_and_diffraction(cfg).b_squared;
  cfg.lens_Rl *= 2;
  double b2 = feas::lens_and_diffraction(cfg).b_squared;
  CHECK(b2 == doctest::Approx(16 * b1).epsilon(1e-14));
}

TEST_CASE("direct evaluation, lambda=700nm Rl=5mm f=25mm") {
  ExperimentConfig cfg = bench();
  cfg.lens_Rl = 5e-3;
  cfg.lens_f = 25e-3;
  auto ld = feas::lens_and_diffraction(cfg);
  double want_b2 = constants::pi * constants::pi * std::pow(5e-3, 4) /
                   (700e-9 * 700e-9 * 25e-3 * 25e-3);
  CHECK(ld.b_squared == doctest::Approx(want_b2).epsilon(1e-15));
  CHECK(ld.R_first ==
        doctest::Approx(1.22 * 700e-9 / (2 * 5e-3 / 25e-3)).epsilon(1e-15));
}

TEST_CASE("rate bound lands at 1e5-1e6 per second for bench parameters") {
  ExperimentConfig cfg = bench();
  bool in_window = false;
  for (auto& [tau, r] : feas::sweep_tau(cfg, 0.1e-12, 4e-12, 40)) {
    CHECK(r.rate_min_lens > 0);
    in_window |= r.rate_min_lens >= 1e5 && r.rate_min_lens <= 1e6;
  }
  CHECK(in_window);
}

TEST_CASE("bounds vanish as tau grows") {
  ExperimentConfig cfg = bench();
  auto sweep = feas::sweep_tau(cfg, 1e-12, 1e-6, 30);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    CHECK(sweep[i].second.rate_min_lens < sweep[i - 1].second.rate_min_lens);
    CHECK(sweep[i].second.I_s_min < sweep[i - 1].second.I_s_min);
  }
  CHECK(sweep.back().second.rate_min_lens <
        1e-2 * sweep.front().second.rate_min_lens);
}

TEST_CASE("all bounds scale as 1/sqrt(tau T)") {
  ExperimentConfig cfg = bench();
  auto a = feas::minimal_bounds(cfg);
  ExperimentConfig c4 = cfg;
  c4.tau_coherence = 4 * cfg.tau_coherence;
  auto b = feas::minimal_bounds(c4);
  CHECK(b.I_s_min == doctest::Approx(a.I_s_min / 2).epsilon(1e-12));
  CHECK(b.I_in_min == doctest::Approx(a.I_in_min / 2).epsilon(1e-12));
  CHECK(b.rate_min_lens == doctest::Approx(a.rate_min_lens / 2).epsilon(1e-12));
  CHECK(b.rate_min_coherence ==
        doctest::Approx(a.rate_min_coherence / 2).epsilon(1e-12));
}

TEST_CASE("saturated coherence condition makes the two rate bounds equal") {
  // d lambda = Rl Rc: substituting Rl = d lambda / Rc into the lens-form
  // bound must give the coherence-form bound identically.
  ExperimentConfig cfg = bench();
  cfg.crystal_radius_Rc = 3.1e-4;
  cfg.source_distance_d = cfg.lens_Rl * cfg.crystal_radius_Rc /
                          cfg.lambda_center;
  auto r = feas::minimal_bounds(cfg);
  CHECK(r.rate_min_lens ==
        doctest::Approx(r.rate_min_coherence).epsilon(1e-12));
  CHECK(r.cond_spatial_coherence);
}

TEST_CASE("margins and flags") {
  ExperimentConfig cfg = bench();
  auto r = feas::minimal_bounds(cfg, 10.0);
  CHECK(r.margin_I_s == doctest::Approx(r.I_s_config / r.I_s_min).epsilon(1e-14));
  CHECK(r.cond_signal_dominates == (r.margin_I_s >= 10.0));
  CHECK(r.cond_small_radius);
  // Rate margins share the configured rate.
  CHECK(r.margin_rate_lens ==
        doctest::Approx(r.rate_config / r.rate_min_lens).epsilon(1e-14));
  CHECK_THROWS(feas::minimal_bounds(cfg, 0.5));
}

} // TEST_SUITE
