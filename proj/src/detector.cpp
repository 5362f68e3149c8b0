#include "zpdc/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace zpdc::det {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double field_scale(double omega, const ExperimentConfig& cfg) {
  return omega * std::sqrt(constants::hbar /
                           (2.0 * constants::c * constants::c *
                            constants::epsilon0 * cfg.T_window *
                            cfg.detector_L));
}

namespace {

const std::vector<std::complex<double>>& beam_of(
    const field::BeamAmplitudes& beams, int detector_id) {
  if (detector_id == 1) return beams.beam1;
  if (detector_id == 2) return beams.beam2;
  throw std::invalid_argument("detector_id must be 1 or 2");
}

} // namespace

void filter_fields(const field::BeamAmplitudes& beams, const ModeGrid& grid,
                   const ExperimentConfig& cfg, int detector_id,
                   FilteredFieldSet& out) {
  const auto& beta = beam_of(beams, detector_id);
  if (beta.size() != grid.size())
    throw std::invalid_argument("filter_fields: beams not defined on grid");
  out.detector_id = detector_id;
  out.e_plus.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    out.e_plus[j] = field_scale(grid.frequencies[j], cfg) * beta[j];
}

FilteredFieldSet filter_fields(const field::BeamAmplitudes& beams,
                               const ModeGrid& grid,
                               const ExperimentConfig& cfg, int detector_id) {
  FilteredFieldSet out;
  filter_fields(beams, grid, cfg, detector_id, out);
  return out;
}

FilteredFieldSet filter_fields_general(
    std::span<const double> mode_freqs,
    std::span<const std::complex<double>> beta,
    std::span<const double> element_freqs, const ExperimentConfig& cfg,
    int detector_id) {
  if (detector_id != 1 && detector_id != 2)
    throw std::invalid_argument("detector_id must be 1 or 2");
  if (mode_freqs.size() != beta.size())
    throw std::invalid_argument("filter_fields_general: size mismatch");
  FilteredFieldSet out;
  out.detector_id = detector_id;
  out.e_plus.assign(element_freqs.size(), {0.0, 0.0});
  for (std::size_t j = 0; j < element_freqs.size(); ++j) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < mode_freqs.size(); ++k) {
      double w = sinc(0.5 * cfg.T_window * (mode_freqs[k] - element_freqs[j]));
      acc += beta[k] * w;
    }
    out.e_plus[j] = field_scale(element_freqs[j], cfg) * acc;
  }
  return out;
}

IntensitySample effective_intensity(const FilteredFieldSet& fields,
                                    const DerivedParams& derived) {
  double sum = 0;
  for (const auto& e : fields.e_plus) sum += std::norm(e);
  IntensitySample s;
  s.detector_id = fields.detector_id;
  s.I_bar = constants::c * constants::epsilon0 * sum;
  s.u = s.I_bar / derived.I0_bar;
  return s;
}

double detection_probability(const IntensitySample& sample,
                             const DetectionLaw& law) {
  if (!(sample.u > 1.0 + law.margin * law.s)) return 0.0;
  double p = -std::expm1(-law.gamma * (sample.u - 1.0) / law.s);
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

ClickOutcome sample_clicks(double p1, double p2, rng::Stream& stream) {
  if (!(p1 >= 0 && p1 <= 1) || !(p2 >= 0 && p2 <= 1))
    throw std::invalid_argument("sample_clicks: probabilities must be in [0,1]");
  ClickOutcome out;
  out.p1 = p1;
  out.p2 = p2;
  out.clicked1 = stream.uniform() < p1;
  out.clicked2 = stream.uniform() < p2;
  return out;
}

} // namespace zpdc::det
