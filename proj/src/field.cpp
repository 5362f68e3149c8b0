#include "zpdc/field.hpp"

#include <stdexcept>

namespace zpdc::field {

void sample_beam_vacuum(std::size_t n_modes, rng::Stream& stream,
                        std::vector<std::complex<double>>& out) {
  out.resize(n_modes);
  // Re and Im each N(0, 1/4) so <|alpha|^2> = 1/2.
  for (std::size_t j = 0; j < n_modes; ++j)
    out[j] = stream.complex_normal(0.5);
}

AmplitudeSet sample_vacuum(const ModeGrid& grid, rng::Stream& beam1_stream,
                           rng::Stream& beam2_stream) {
  AmplitudeSet s;
  sample_beam_vacuum(grid.size(), beam1_stream, s.beam1);
  sample_beam_vacuum(grid.size(), beam2_stream, s.beam2);
  return s;
}

void apply_pdc(const AmplitudeSet& amps, const ModeGrid& grid, double g,
               std::size_t n_coupled_pairs, BeamAmplitudes& out) {
  const std::size_t n = grid.size();
  if (amps.beam1.size() != n || amps.beam2.size() != n)
    throw std::out_of_range("apply_pdc: amplitude set does not match grid");
  if (!(g * g < 1.0))
    throw std::invalid_argument("apply_pdc: requires g^2 < 1");

  out.g_used = g;
  out.beam1 = amps.beam1;
  out.beam2 = amps.beam2;
  const double a = 1.0 + g * g / 2.0;
  const std::size_t pairs = std::min(n_coupled_pairs, grid.pair_count());
  for (std::size_t p = 0; p < pairs; ++p) {
    std::size_t j = p;
    std::size_t k = grid.conjugate_index(p);
    out.beam1[j] = a * amps.beam1[j] + g * std::conj(amps.beam2[k]);
    out.beam2[k] = a * amps.beam2[k] + g * std::conj(amps.beam1[j]);
  }
  return;
}

BeamAmplitudes apply_pdc(const AmplitudeSet& amps, const ModeGrid& grid,
                         double g) {
  BeamAmplitudes out;
  apply_pdc(amps, grid, g, grid.pair_count(), out);
  return out;
}

double expected_signal_intensity(const ExperimentConfig& cfg,
                                 const DerivedParams& derived) {
  return pair_intensity_excess(cfg.g_coupling) * derived.I0_bar;
}

} // namespace zpdc::field
