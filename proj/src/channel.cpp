#include "mcdbp/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "mcdbp/fft.hpp"
#include "mcdbp/rng.hpp"

namespace mcdbp {

StepPlan log_step_boundaries(double length_km, double alpha_np_per_km, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("log_step_boundaries: n_steps must be >= 1");
  if (length_km < 0) throw std::invalid_argument("log_step_boundaries: negative length");
  if (alpha_np_per_km < 0) throw std::invalid_argument("log_step_boundaries: negative alpha");

  // Below this the closed form is numerically indistinguishable from the
  // uniform (lossless) limit.
  if (alpha_np_per_km * length_km < 1e-9) return uniform_step_boundaries(length_km, n_steps);

  StepPlan plan;
  plan.boundaries_km.resize(n_steps + 1);
  const double depletion = 1.0 - std::exp(-alpha_np_per_km * length_km);
  plan.boundaries_km[0] = 0.0;
  for (int k = 1; k < n_steps; ++k) {
    const double frac = double(k) / double(n_steps);
    plan.boundaries_km[k] = -std::log1p(-frac * depletion) / alpha_np_per_km;
  }
  plan.boundaries_km[n_steps] = length_km;
  return plan;
}

StepPlan uniform_step_boundaries(double length_km, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("uniform_step_boundaries: n_steps must be >= 1");
  StepPlan plan;
  plan.boundaries_km.resize(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k)
    plan.boundaries_km[k] = length_km * double(k) / double(n_steps);
  return plan;
}

StepPlan make_step_plan(const FiberSpec& fiber, int steps_per_span) {
  if (fiber.step_rule == StepRule::uniform)
    return uniform_step_boundaries(fiber.span_length_km, steps_per_span);
  return log_step_boundaries(fiber.span_length_km, fiber.alpha_np_per_m() * 1000.0,
                             steps_per_span);
}

FiberParams FiberParams::from(const FiberSpec& fiber, double wavelength_m) {
  FiberParams p;
  p.alpha_np_per_m = fiber.alpha_np_per_m();
  p.beta2_s2_per_m = beta2_from_dispersion(fiber.dispersion_ps_nm_km, wavelength_m) * 1e-27;
  p.gamma_nl_per_w_m = fiber.manakov_factor * fiber.gamma_per_w_m();
  p.length_m = fiber.span_length_m();
  return p;
}

namespace {

// Scratch reused across the steps of a span so the angular-frequency table
// and the half-step factor array are not reallocated per step.
struct SsfmWorkspace {
  std::vector<double> w2;        // (2 pi f_k)^2
  ComplexVec half_step_factor;   // shared by both linear halves of one step

  void prepare(const SampledField& field) {
    const std::size_t n = field.size();
    if (w2.size() == n) return;
    w2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = 2.0 * M_PI * fft::bin_frequency(k, n, field.sample_rate_hz);
      w2[k] = w * w;
    }
    half_step_factor.resize(n);
  }
};

// Effective nonlinear weight referred to the power at the step start. The
// rotation is applied at the step midpoint where the instantaneous power is
// e^{-alpha h/2} times the step-start value; the extra e^{+alpha h/2} factor
// refers it back, giving phi = gamma_nl * P_start * (1 - e^{-alpha h})/alpha.
double nonlinear_weight(double h_m, double alpha_np_per_m) {
  if (std::abs(alpha_np_per_m * h_m) < 1e-12) return h_m;
  const double h_eff = -std::expm1(-alpha_np_per_m * h_m) / alpha_np_per_m;
  return std::exp(alpha_np_per_m * h_m / 2.0) * h_eff;
}

void apply_spectral_factor(SampledField& field, const ComplexVec& factor) {
  fft::forward(field.x_pol);
  fft::forward(field.y_pol);
  for (std::size_t k = 0; k < field.size(); ++k) {
    field.x_pol[k] *= factor[k];
    field.y_pol[k] *= factor[k];
  }
  fft::inverse(field.x_pol);
  fft::inverse(field.y_pol);
}

void nonlinear_step(SampledField& field, double h_m, const FiberParams& fiber, double sign) {
  if (fiber.gamma_nl_per_w_m == 0.0) return;
  const double w = nonlinear_weight(h_m, fiber.alpha_np_per_m);
  const double coeff = sign * fiber.gamma_nl_per_w_m * w;
  const std::size_t n = field.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double power = std::norm(field.x_pol[i]) + std::norm(field.y_pol[i]);
    const cdouble rot = std::polar(1.0, coeff * power);
    field.x_pol[i] *= rot;
    field.y_pol[i] *= rot;
  }
}

// Symmetric split step: half-step dispersion+loss, joint nonlinear rotation,
// half-step dispersion+loss. Both halves share one factor array.
void ssfm_step_ws(SampledField& field, double h_m, const FiberParams& fiber, double sign,
                  SsfmWorkspace& ws) {
  if (h_m <= 0.0) throw std::invalid_argument("ssfm_step: step length must be positive");
  ws.prepare(field);
  const double amp = std::exp(-sign * fiber.alpha_np_per_m * h_m / 4.0);
  const double coeff = -sign * 0.5 * fiber.beta2_s2_per_m * (h_m / 2.0);
  for (std::size_t k = 0; k < field.size(); ++k)
    ws.half_step_factor[k] = std::polar(amp, coeff * ws.w2[k]);

  apply_spectral_factor(field, ws.half_step_factor);
  nonlinear_step(field, h_m, fiber, sign);
  apply_spectral_factor(field, ws.half_step_factor);
}

}  // namespace

void ssfm_step(SampledField& field, double h_m, const FiberParams& fiber, Direction direction) {
  SsfmWorkspace ws;
  ssfm_step_ws(field, h_m, fiber, direction == Direction::forward ? 1.0 : -1.0, ws);
}

void propagate_span(SampledField& field, const FiberParams& fiber, const StepPlan& plan) {
  SsfmWorkspace ws;
  for (int k = 0; k < plan.n_steps(); ++k)
    ssfm_step_ws(field, plan.step_length_km(k) * 1000.0, fiber, 1.0, ws);
}

void backpropagate_span(SampledField& field, const FiberParams& fiber, const StepPlan& plan) {
  SsfmWorkspace ws;
  for (int k = plan.n_steps() - 1; k >= 0; --k)
    ssfm_step_ws(field, plan.step_length_km(k) * 1000.0, fiber, -1.0, ws);
}

AmpModel AmpModel::for_span(const FiberSpec& fiber, double noise_figure_db, double wavelength_m,
                            bool noiseless) {
  AmpModel amp;
  amp.gain_db = span_gain_db(fiber);
  amp.noise_figure_db = noise_figure_db;
  amp.noiseless = noiseless;
  const double gain = db_to_linear(amp.gain_db);
  if (gain > 1.0) {
    // Exact NF relation, not the high-gain approximation.
    const double n_sp = db_to_linear(noise_figure_db) / 2.0 * gain / (gain - 1.0);
    const double photon_energy = kPhysics.h * kPhysics.c / wavelength_m;
    amp.ase_psd_per_pol_w_hz = n_sp * photon_energy * (gain - 1.0);
  }
  return amp;
}

void edfa(SampledField& field, const AmpModel& amp, int amplifier_index,
          std::uint64_t master_seed) {
  field.scale(std::sqrt(db_to_linear(amp.gain_db)));
  if (amp.noiseless || amp.ase_psd_per_pol_w_hz <= 0.0) return;

  // White circular Gaussian over the whole simulation grid: total per-pol
  // variance S_ase * f_s, split evenly between the quadratures.
  const double sigma = std::sqrt(amp.ase_psd_per_pol_w_hz * field.sample_rate_hz / 2.0);
  Prng rng(derive_seed(master_seed, stream_tag(StreamRole::ase, std::uint64_t(amplifier_index))));
  for (auto& v : field.x_pol) v += cdouble{sigma * rng.gaussian(), sigma * rng.gaussian()};
  for (auto& v : field.y_pol) v += cdouble{sigma * rng.gaussian(), sigma * rng.gaussian()};
}

SampledField propagate_link(SampledField field, const LinkSpec& link, double wavelength_m,
                            std::uint64_t master_seed, const SpanHook& after_span) {
  const FiberParams fiber = FiberParams::from(link.fiber, wavelength_m);
  const StepPlan plan = make_step_plan(link.fiber, link.fiber.steps_per_span);
  const AmpModel amp =
      AmpModel::for_span(link.fiber, link.noise_figure_db, wavelength_m, link.noiseless);
  for (int span = 0; span < link.n_spans; ++span) {
    if (fiber.length_m > 0.0) propagate_span(field, fiber, plan);
    edfa(field, amp, span, master_seed);
    if (after_span) after_span(span, field);
  }
  return field;
}

}  // namespace mcdbp
