#pragma once

#include "mcdbp/channel.hpp"
#include "mcdbp/config.hpp"
#include "mcdbp/field.hpp"

namespace mcdbp {

// Frequency-domain chromatic dispersion equalisation over the whole link:
// all-pass phase exp(+i (beta2/2) w^2 L_total), the exact inverse of the
// forward dispersion operator.
SampledField edc(const SampledField& field, const LinkSpec& link, double wavelength_m);

// Multi-channel digital back-propagation: band-select, rescale to the true
// launch power of the selected channels, then per span in reverse order undo
// the EDFA gain and run inverted split steps over the mirrored step plan.
// The scale applied in step (2) is removed again afterwards, so with gamma=0
// this degenerates exactly to edc() of the band-selected field.
SampledField dbp(const SampledField& field, const DbpSpec& spec, const LinkSpec& link,
                 const WdmSpec& wdm);

}  // namespace mcdbp
