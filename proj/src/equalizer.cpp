#include "mcdbp/equalizer.hpp"

#include <cmath>
#include <stdexcept>

#include "mcdbp/fft.hpp"
#include "mcdbp/sigproc.hpp"

namespace mcdbp {

SampledField edc(const SampledField& field, const LinkSpec& link, double wavelength_m) {
  const double beta2 = beta2_from_dispersion(link.fiber.dispersion_ps_nm_km, wavelength_m) * 1e-27;
  const double total_length_m = link.fiber.span_length_m() * link.n_spans;
  SampledField out = field;
  if (total_length_m == 0.0 || beta2 == 0.0) return out;

  const std::size_t n = field.size();
  fft::forward(out.x_pol);
  fft::forward(out.y_pol);
  const double coeff = 0.5 * beta2 * total_length_m;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 2.0 * M_PI * fft::bin_frequency(k, n, field.sample_rate_hz);
    const cdouble factor = std::polar(1.0, coeff * w * w);
    out.x_pol[k] *= factor;
    out.y_pol[k] *= factor;
  }
  fft::inverse(out.x_pol);
  fft::inverse(out.y_pol);
  return out;
}

SampledField dbp(const SampledField& field, const DbpSpec& spec, const LinkSpec& link,
                 const WdmSpec& wdm) {
  if (spec.bandwidth_hz > field.sample_rate_hz)
    throw std::invalid_argument("dbp: back-propagated bandwidth exceeds the simulation grid");

  // (1) select the back-propagated band
  SampledField out = bandwidth_select(field, spec.bandwidth_hz, spec.filter_shape);

  // (2) rescale so the in-band power matches the known launch power of the
  // selected channels; DBP must see the true field scale for the nonlinear
  // phase to be correct.
  const double launch_w = dbm_to_watts(spec.launch_power_dbm);
  double scale = 1.0;
  if (spec.power_normalization == DbpNormalization::total_band) {
    const int k_channels =
        static_cast<int>(std::lround(spec.bandwidth_hz / wdm.channel_spacing_hz));
    const double measured = out.total_power();
    if (measured <= 0.0) throw std::invalid_argument("dbp: silent field");
    scale = std::sqrt(double(k_channels) * launch_w / measured);
  } else {
    const double guard = wdm.symbol_rate_hz * (1.0 + wdm.rolloff);
    const double measured = band_power(out, 0.0, guard);
    if (measured <= 0.0) throw std::invalid_argument("dbp: silent centre channel");
    scale = std::sqrt(launch_w / measured);
  }
  out.scale(scale);

  // (3) spans in reverse order: undo the amplifier gain, then inverted split
  // steps over the mirrored plan at the requested DBP step count.
  const FiberParams fiber = FiberParams::from(link.fiber, wdm.centre_wavelength_m);
  const StepPlan plan = make_step_plan(link.fiber, spec.steps_per_span);
  const double inv_gain_amp = std::sqrt(db_to_linear(-span_gain_db(link.fiber)));
  for (int span = 0; span < link.n_spans; ++span) {
    out.scale(inv_gain_amp);
    if (fiber.length_m > 0.0) backpropagate_span(out, fiber, plan);
  }

  // (4) restore the nominal scale the field arrived with.
  out.scale(1.0 / scale);
  return out;
}

}  // namespace mcdbp
