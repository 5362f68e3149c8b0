#include "zpdc/mc.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "zpdc/detector.hpp"
#include "zpdc/errors.hpp"
#include "zpdc/field.hpp"
#include "zpdc/io.hpp"
#include "zpdc/rng.hpp"
#include "zpdc/special.hpp"

namespace zpdc::mc {

namespace {

constexpr long long kBlockSize = 4096;

/// Compensated running sum. merge() folds another sum in; callers fold
/// blocks in index order so the result is independent of worker count.
struct KahanSum {
  double s = 0, c = 0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  void merge(const KahanSum& o) {
    add(o.s);
    add(-o.c);
  }
  double value() const { return s - c; }
};

struct Accumulator {
  long long n = 0;
  KahanSum d1, d1_sq, d1_cu; // d = u - 1
  KahanSum d2, d2_sq;
  KahanSum q12, q12_sq; // q = d1 * d2
  long long clicks1 = 0, clicks2 = 0, clicks12 = 0;
  double min_u1 = std::numeric_limits<double>::infinity();
  double min_u2 = std::numeric_limits<double>::infinity();

  void add(double u1, double u2, bool c1, bool c2) {
    ++n;
    double a = u1 - 1.0, b = u2 - 1.0;
    d1.add(a);
    d1_sq.add(a * a);
    d1_cu.add(a * a * a);
    d2.add(b);
    d2_sq.add(b * b);
    double q = a * b;
    q12.add(q);
    q12_sq.add(q * q);
    clicks1 += c1;
    clicks2 += c2;
    clicks12 += c1 && c2;
    min_u1 = std::min(min_u1, u1);
    min_u2 = std::min(min_u2, u2);
  }

  void merge(const Accumulator& o) {
    n += o.n;
    d1.merge(o.d1);
    d1_sq.merge(o.d1_sq);
    d1_cu.merge(o.d1_cu);
    d2.merge(o.d2);
    d2_sq.merge(o.d2_sq);
    q12.merge(o.q12);
    q12_sq.merge(o.q12_sq);
    clicks1 += o.clicks1;
    clicks2 += o.clicks2;
    clicks12 += o.clicks12;
    min_u1 = std::min(min_u1, o.min_u1);
    min_u2 = std::min(min_u2, o.min_u2);
  }

  double mean_d1() const { return d1.value() / n; }
  double mean_d2() const { return d2.value() / n; }
  double sd1() const {
    return std::sqrt(std::max(0.0, (d1_sq.value() - d1.value() * mean_d1()) /
                                       (n - 1)));
  }
  double sd2() const {
    return std::sqrt(std::max(0.0, (d2_sq.value() - d2.value() * mean_d2()) /
                                       (n - 1)));
  }
  double cov() const {
    return (q12.value() - d1.value() * mean_d2()) / (n - 1);
  }
  double skewness1() const {
    double m = mean_d1();
    double m2 = d1_sq.value() / n - m * m;
    double m3 = d1_cu.value() / n - 3.0 * m * (d1_sq.value() / n) + 2.0 * m * m * m;
    return m3 / std::pow(m2, 1.5);
  }
};

struct HistSpec {
  double lo = 0, hi = 0;
  int bins = 0;
};

struct BlockOutput {
  Accumulator acc;
  std::vector<long long> hist;
  std::string trace;
};

struct SimResult {
  Accumulator acc;
  std::vector<long long> hist;
  long long hist_under = 0, hist_over = 0;
  std::string trace;
};

void append_trace(std::string& out, long long trial, int det, double u,
                  double p, bool clicked) {
  char buf[96];
  auto put = [&](double v) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
  };
  out.append(std::to_string(trial));
  out.push_back(',');
  out.append(std::to_string(det));
  out.push_back(',');
  put(u);
  out.push_back(',');
  put(p);
  out.push_back(',');
  out.push_back(clicked ? '1' : '0');
  out.push_back('\n');
}

SimResult simulate(const ExperimentConfig& cfg, const Scenario& scenario,
                   long long n_trials, std::uint64_t seed,
                   const RunOptions& opts, const HistSpec* hist) {
  if (n_trials < 1) throw ConfigError("n_trials", "must be >= 1");
  check_config(cfg);
  const DerivedParams derived = derive_params(cfg);
  const ModeGrid grid = build_mode_grid(cfg);
  const det::DetectionLaw law = det::detection_law(cfg, derived);
  const bool zpf = scenario.kind == ScenarioKind::ZpfOnly;
  const double g = zpf ? 0.0 : cfg.g_coupling;
  const std::size_t coupled =
      zpf ? 0 : std::min<std::size_t>(scenario.coupled_pairs, grid.pair_count());
  // An uncoupled single arm never looks at beam 2; skipping its draws does
  // not disturb beam 1 (disjoint streams).
  const bool need_beam2 = scenario.kind != ScenarioKind::SingleArm || g != 0.0;
  const bool want_trace = !opts.trace_path.empty();

  const long long n_blocks = (n_trials + kBlockSize - 1) / kBlockSize;
  std::vector<BlockOutput> blocks(static_cast<std::size_t>(n_blocks));
  std::atomic<long long> next_block{0};

  auto worker = [&]() {
    field::AmplitudeSet amps;
    field::BeamAmplitudes beams;
    det::FilteredFieldSet ff1, ff2;
    for (;;) {
      long long b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      BlockOutput& out = blocks[static_cast<std::size_t>(b)];
      if (hist) out.hist.assign(static_cast<std::size_t>(hist->bins) + 2, 0);
      const long long lo = b * kBlockSize;
      const long long hi = std::min(n_trials, lo + kBlockSize);
      for (long long t = lo; t < hi; ++t) {
        auto trial = static_cast<std::uint64_t>(t);
        rng::Stream s1(seed, trial, rng::Role::Beam1);
        rng::Stream s2(seed, trial, rng::Role::Beam2);
        rng::Stream sc(seed, trial, rng::Role::Clicks);
        field::sample_beam_vacuum(grid.size(), s1, amps.beam1);
        if (need_beam2)
          field::sample_beam_vacuum(grid.size(), s2, amps.beam2);
        else
          amps.beam2.assign(grid.size(), {0.0, 0.0});
        field::apply_pdc(amps, grid, g, coupled, beams);
        det::filter_fields(beams, grid, cfg, 1, ff1);
        det::IntensitySample i1 = det::effective_intensity(ff1, derived);
        double p1 = det::detection_probability(i1, law);
        det::IntensitySample i2{};
        double p2 = 0;
        if (scenario.kind != ScenarioKind::SingleArm) {
          det::filter_fields(beams, grid, cfg, 2, ff2);
          i2 = det::effective_intensity(ff2, derived);
          p2 = det::detection_probability(i2, law);
        }
        det::ClickOutcome click = det::sample_clicks(p1, p2, sc);
        out.acc.add(i1.u, i2.u, click.clicked1, click.clicked2);
        if (hist) {
          double w = (i1.u - hist->lo) / (hist->hi - hist->lo);
          long long k = static_cast<long long>(std::floor(w * hist->bins));
          if (k < 0)
            ++out.hist[0];
          else if (k >= hist->bins)
            ++out.hist[static_cast<std::size_t>(hist->bins) + 1];
          else
            ++out.hist[static_cast<std::size_t>(k) + 1];
        }
        if (want_trace) {
          append_trace(out.trace, t, 1, i1.u, p1, click.clicked1);
          if (scenario.kind != ScenarioKind::SingleArm)
            append_trace(out.trace, t, 2, i2.u, p2, click.clicked2);
        }
      }
    }
  };

  int n_workers = opts.workers > 0
                      ? opts.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  n_workers = static_cast<int>(
      std::min<long long>(n_workers, n_blocks));
  if (n_workers == 1) {
    worker();
  } else {
    // No partial results on failure: the first exception wins, the run dies.
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto guarded = [&]() {
      try {
        worker();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next_block.store(n_blocks);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(guarded);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Fold blocks in index order: identical result for any worker count.
  SimResult res;
  if (hist) res.hist.assign(static_cast<std::size_t>(hist->bins), 0);
  for (auto& b : blocks) {
    res.acc.merge(b.acc);
    if (hist) {
      res.hist_under += b.hist[0];
      res.hist_over += b.hist[static_cast<std::size_t>(hist->bins) + 1];
      for (int k = 0; k < hist->bins; ++k)
        res.hist[static_cast<std::size_t>(k)] +=
            b.hist[static_cast<std::size_t>(k) + 1];
    }
    if (want_trace) res.trace += b.trace;
  }
  if (want_trace) {
    std::string header = "# zpdc trace\ntrial,detector,u,probability,clicked\n";
    io::write_atomic(opts.trace_path, header + res.trace);
  }
  return res;
}

double binomial_se(long long k, long long n) {
  double p = static_cast<double>(k) / static_cast<double>(n);
  return std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(n)));
}

} // namespace

ScenarioKind scenario_from_name(const std::string& name) {
  if (name == "zpf") return ScenarioKind::ZpfOnly;
  if (name == "single") return ScenarioKind::SingleArm;
  if (name == "joint") return ScenarioKind::Joint;
  throw ConfigError("scenario", "must be one of zpf|single|joint");
}

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::ZpfOnly: return "zpf";
    case ScenarioKind::SingleArm: return "single";
    case ScenarioKind::Joint: return "joint";
  }
  return "?";
}

std::vector<RateEstimate> run_trials(const ExperimentConfig& cfg,
                                     const Scenario& scenario,
                                     long long n_trials, std::uint64_t seed,
                                     const RunOptions& opts) {
  SimResult r = simulate(cfg, scenario, n_trials, seed, opts, nullptr);
  const Accumulator& a = r.acc;
  const long long n = a.n;
  std::vector<RateEstimate> out;
  auto push = [&](const std::string& q, double mean, double se) {
    out.push_back({q, mean, se, n, seed});
  };
  double sd1 = a.sd1();
  push("u1_mean", 1.0 + a.mean_d1(), sd1 / std::sqrt(double(n)));
  push("u1_sd", sd1, sd1 / std::sqrt(2.0 * double(n - 1)));
  if (scenario.kind != ScenarioKind::SingleArm) {
    double sd2 = a.sd2();
    push("u2_mean", 1.0 + a.mean_d2(), sd2 / std::sqrt(double(n)));
    push("u2_sd", sd2, sd2 / std::sqrt(2.0 * double(n - 1)));
  }
  push("p1", double(a.clicks1) / n, binomial_se(a.clicks1, n));
  if (scenario.kind != ScenarioKind::SingleArm) {
    push("p2", double(a.clicks2) / n, binomial_se(a.clicks2, n));
    push("p12", double(a.clicks12) / n, binomial_se(a.clicks12, n));
    double qm = a.q12.value() / n;
    double sd_q = std::sqrt(
        std::max(0.0, (a.q12_sq.value() - a.q12.value() * qm) / (n - 1)));
    push("u_cov", a.cov(), sd_q / std::sqrt(double(n)));
  }
  // Smallest intensity seen; u >= 0 in every trial by construction.
  push("u1_min", a.min_u1, 0.0);
  if (scenario.kind != ScenarioKind::SingleArm) push("u2_min", a.min_u2, 0.0);
  return out;
}

GridPrediction grid_prediction(const ExperimentConfig& cfg,
                               const Scenario& scenario) {
  const DerivedParams d = derive_params(cfg);
  const ModeGrid grid = build_mode_grid(cfg);
  const bool zpf = scenario.kind == ScenarioKind::ZpfOnly;
  const double g = zpf ? 0.0 : cfg.g_coupling;
  const std::size_t coupled =
      zpf ? 0 : std::min<std::size_t>(scenario.coupled_pairs, grid.pair_count());
  const std::size_t n = grid.size();

  // base_j = (per-element zeropoint mean)/I0_bar; u = sum 2 base_j |beta_j|^2.
  std::vector<double> base(n);
  for (std::size_t j = 0; j < n; ++j) {
    double w = grid.frequencies[j];
    base[j] = constants::hbar * w * w /
              (4.0 * constants::c * cfg.T_window * cfg.detector_L) / d.I0_bar;
  }
  const double kappa = field::pair_intensity_excess(g);
  const double cov_pair = field::pair_intensity_cov(g);

  GridPrediction p;
  double var1 = 0, var2 = 0;
  for (std::size_t j = 0; j < n; ++j) {
    bool c1 = j < coupled;                      // beam-1 mode j coupled
    bool c2 = grid.conjugate_index(j) < coupled; // beam-2 mode j coupled
    p.mean_u1 += base[j] * (1.0 + (c1 ? kappa : 0.0));
    p.mean_u2 += base[j] * (1.0 + (c2 ? kappa : 0.0));
    double f1 = base[j] * (1.0 + (c1 ? kappa : 0.0));
    double f2 = base[j] * (1.0 + (c2 ? kappa : 0.0));
    var1 += f1 * f1;
    var2 += f2 * f2;
  }
  for (std::size_t j = 0; j < coupled; ++j) {
    std::size_t k = grid.conjugate_index(j);
    p.cov_u += 4.0 * base[j] * base[k] * cov_pair;
  }
  p.sd_u1 = std::sqrt(var1);
  p.sd_u2 = std::sqrt(var2);
  p.rho_c = p.cov_u / (p.sd_u1 * p.sd_u2);

  // Standardized detection-law parameters against the grid-exact density.
  auto eff = [&](double mean_u, double sd_u) {
    analytic::SingleParams sp;
    sp.x = (mean_u - 1.0) / sd_u;
    sp.m = cfg.I_m_margin * d.s_ratio / sd_u;
    sp.gamma = cfg.zeta_gain * d.sigma0 * sd_u / d.s_ratio;
    return sp;
  };
  p.eff1 = eff(p.mean_u1, p.sd_u1);
  p.eff2 = eff(p.mean_u2, p.sd_u2);
  return p;
}

std::vector<ComparisonRow> compare(const ExperimentConfig& cfg,
                                   const Scenario& scenario,
                                   long long n_trials, std::uint64_t seed,
                                   const RunOptions& opts) {
  std::vector<RateEstimate> est = run_trials(cfg, scenario, n_trials, seed, opts);
  GridPrediction pred = grid_prediction(cfg, scenario);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ComparisonRow> rows;
  auto analytic_for = [&](const std::string& q) -> double {
    if (q == "u1_mean") return pred.mean_u1;
    if (q == "u2_mean") return pred.mean_u2;
    if (q == "u1_sd") return pred.sd_u1;
    if (q == "u2_sd") return pred.sd_u2;
    if (q == "p1") return analytic::detail::p_single_raw(pred.eff1);
    if (q == "p2") return analytic::detail::p_single_raw(pred.eff2);
    if (q == "p12")
      return analytic::detail::p_joint_raw({pred.eff1, pred.eff2, pred.rho_c})
          .value;
    if (q == "u_cov") return pred.cov_u;
    return nan;
  };

  for (const RateEstimate& e : est) {
    ComparisonRow row;
    row.quantity = e.quantity;
    row.mc = e;
    row.analytic = analytic_for(e.quantity);
    if (std::isnan(row.analytic)) continue; // no analytic counterpart
    bool probability_row = e.quantity[0] == 'p';
    if (probability_row && e.mean == 0.0) {
      // No events observed: one-sided 95% bound, log(20)/n.
      double bound = std::log(20.0) / double(e.n);
      row.z_score = nan;
      row.pass = row.analytic <= bound;
      row.note = "zero events; analytic vs one-sided bound";
    } else if (e.std_error > 0) {
      row.z_score = (e.mean - row.analytic) / e.std_error;
      row.pass = std::abs(row.z_score) <= 4.0;
    } else {
      row.z_score = nan;
      row.pass = e.mean == row.analytic;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Histogram histogram_u(const ExperimentConfig& cfg, long long n_trials,
                      std::uint64_t seed, int bins, const RunOptions& opts) {
  if (bins < 10) throw ConfigError("bins", "histogram needs >= 10 bins");
  // Detector 1 only; with g = 0 this is the pure zeropoint density.
  Scenario scenario{ScenarioKind::SingleArm, static_cast<std::size_t>(-1)};
  GridPrediction pred = grid_prediction(cfg, scenario);
  HistSpec spec;
  spec.lo = pred.mean_u1 - 8.0 * pred.sd_u1;
  spec.hi = pred.mean_u1 + 8.0 * pred.sd_u1;
  spec.bins = bins;
  SimResult r = simulate(cfg, scenario, n_trials, seed, opts, &spec);

  Histogram h;
  h.n = r.acc.n;
  h.underflow = r.hist_under;
  h.overflow = r.hist_over;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  double width = (spec.hi - spec.lo) / bins;
  for (int k = 0; k <= bins; ++k)
    h.edges[static_cast<std::size_t>(k)] = spec.lo + k * width;
  h.density.resize(static_cast<std::size_t>(bins));
  h.expected.resize(static_cast<std::size_t>(bins));
  double x = pred.eff1.x;
  double chi2 = 0;
  int used = 0;
  for (int k = 0; k < bins; ++k) {
    auto i = static_cast<std::size_t>(k);
    h.density[i] = double(r.hist[i]) / (double(h.n) * width);
    // Exact bin mass of the grid-parameter Gaussian.
    double z0 = (h.edges[i] - 1.0 - x * pred.sd_u1) / pred.sd_u1;
    double z1 = (h.edges[i + 1] - 1.0 - x * pred.sd_u1) / pred.sd_u1;
    double mass = analytic::norm_upper(z0) - analytic::norm_upper(z1);
    h.expected[i] = mass / width;
    double expected_count = mass * double(h.n);
    if (expected_count >= 5.0) {
      double diff = double(r.hist[i]) - expected_count;
      chi2 += diff * diff / expected_count;
      ++used;
    }
  }
  h.chi_square = chi2;
  h.dof = used > 1 ? used - 1 : 0;
  h.skewness = r.acc.skewness1();
  return h;
}

RateEstimate mc_single_density(const analytic::SingleParams& p, long long n,
                               std::uint64_t seed) {
  const double c = p.m - p.x;
  long long clicks = 0;
  for (long long t = 0; t < n; ++t) {
    rng::Stream s(seed, static_cast<std::uint64_t>(t), rng::Role::Density);
    double tval = s.normal();
    double prob = tval > c ? -std::expm1(-p.gamma * (tval + p.x)) : 0.0;
    if (s.uniform() < prob) ++clicks;
  }
  return {"p1_density", double(clicks) / n, binomial_se(clicks, n), n, seed};
}

JointDensityEstimate mc_joint_density(const analytic::JointParams& p,
                                      long long n, std::uint64_t seed) {
  const double c1 = p.d1.m - p.d1.x;
  const double c2 = p.d2.m - p.d2.x;
  const double rho = p.rho_c;
  const double q = std::sqrt(1.0 - rho * rho);
  long long k1 = 0, k2 = 0, k12 = 0;
  KahanSum w_sum, w_sq;
  for (long long t = 0; t < n; ++t) {
    rng::Stream s(seed, static_cast<std::uint64_t>(t), rng::Role::Density);
    double z1 = s.normal();
    double z2 = s.normal();
    double t1 = z1;
    double t2 = rho * z1 + q * z2;
    double prob1 = t1 > c1 ? -std::expm1(-p.d1.gamma * (t1 + p.d1.x)) : 0.0;
    double prob2 = t2 > c2 ? -std::expm1(-p.d2.gamma * (t2 + p.d2.x)) : 0.0;
    double w = prob1 * prob2;
    w_sum.add(w);
    w_sq.add(w * w);
    bool b1 = s.uniform() < prob1;
    bool b2 = s.uniform() < prob2;
    k1 += b1;
    k2 += b2;
    k12 += b1 && b2;
  }
  JointDensityEstimate out;
  out.p1 = {"p1_density", double(k1) / n, binomial_se(k1, n), n, seed};
  out.p2 = {"p2_density", double(k2) / n, binomial_se(k2, n), n, seed};
  out.p12_click = {"p12_click", double(k12) / n, binomial_se(k12, n), n, seed};
  double mean_w = w_sum.value() / n;
  double var_w =
      std::max(0.0, (w_sq.value() - w_sum.value() * mean_w) / (n - 1));
  out.p12_weight = {"p12_weight", mean_w, std::sqrt(var_w / n), n, seed};
  return out;
}

} // namespace zpdc::mc
