#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mcdbp/config.hpp"
#include "mcdbp/field.hpp"

namespace mcdbp {

// Span discretisation. Boundaries run 0 .. L (km), strictly increasing.
// The logarithmic rule places boundaries so every step carries the same
// integral of the exponentially decaying power profile.
struct StepPlan {
  std::vector<double> boundaries_km;

  int n_steps() const { return static_cast<int>(boundaries_km.size()) - 1; }
  double step_length_km(int k) const { return boundaries_km[k + 1] - boundaries_km[k]; }
};

// z_k = -(1/alpha) ln(1 - (k/N)(1 - e^{-alpha L})); uniform in the alpha -> 0
// limit.
StepPlan log_step_boundaries(double length_km, double alpha_np_per_km, int n_steps);
StepPlan uniform_step_boundaries(double length_km, int n_steps);
StepPlan make_step_plan(const FiberSpec& fiber, int steps_per_span);

// Fibre coefficients in SI units with the Manakov 8/9 factor folded into the
// nonlinear coefficient.
struct FiberParams {
  double alpha_np_per_m = 0.0;
  double beta2_s2_per_m = 0.0;
  double gamma_nl_per_w_m = 0.0;  // manakov_factor * gamma
  double length_m = 0.0;

  static FiberParams from(const FiberSpec& fiber, double wavelength_m);
};

enum class Direction { forward, backward };

// One symmetric split step over h metres: half-step dispersion+loss, joint
// nonlinear phase rotation from the step-start power profile, half-step
// dispersion+loss. The backward direction is the exact algebraic inverse.
void ssfm_step(SampledField& field, double h_m, const FiberParams& fiber, Direction direction);

// Sequential split steps over the plan. Output power = input * e^{-alpha L}.
void propagate_span(SampledField& field, const FiberParams& fiber, const StepPlan& plan);
// Reverse traversal with inverted operators (used by DBP).
void backpropagate_span(SampledField& field, const FiberParams& fiber, const StepPlan& plan);

struct AmpModel {
  double gain_db = 0.0;
  double noise_figure_db = 0.0;
  double ase_psd_per_pol_w_hz = 0.0;  // n_sp h nu (G - 1)
  bool noiseless = false;

  static AmpModel for_span(const FiberSpec& fiber, double noise_figure_db, double wavelength_m,
                           bool noiseless);
};

// sqrt(G) gain plus circular complex Gaussian ASE per polarisation with total
// variance ase_psd * sample_rate, seeded per amplifier index.
void edfa(SampledField& field, const AmpModel& amp, int amplifier_index,
          std::uint64_t master_seed);

using SpanHook = std::function<void(int span_index, const SampledField&)>;

// n_spans x (propagate_span then edfa); per-amplifier seeds derived from
// (master_seed, span index).
SampledField propagate_link(SampledField field, const LinkSpec& link, double wavelength_m,
                            std::uint64_t master_seed, const SpanHook& after_span = {});

}  // namespace mcdbp
