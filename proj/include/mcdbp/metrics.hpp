#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "mcdbp/config.hpp"
#include "mcdbp/modem.hpp"
#include "mcdbp/sigproc.hpp"

namespace mcdbp {

// Reporting cap so noiseless oracle runs stay finite.
inline constexpr double kSnrCapDb = 60.0;

struct MetricsReport {
  double snr_db = 0.0;
  double mi_bits_per_2d = 0.0;
  double air_per_channel_bps = 0.0;
  double air_total_bps = 0.0;
  std::size_t n_symbols_used = 0;

  std::string csv_row() const;  // column order documented in csv_header()
  static std::string csv_header();
  std::string to_text() const;  // structured-text record, one field per line
};

// Data-aided SNR: least-squares complex gain h = <tx,rx>/<tx,tx> per
// polarisation, SNR = |h|^2 E|tx|^2 / E|rx - h tx|^2, polarisations averaged
// in linear units. Requires equal lengths >= 1000.
double estimate_snr_db(const std::vector<cdouble>& tx_x, const std::vector<cdouble>& tx_y,
                       const std::vector<cdouble>& rx_x, const std::vector<cdouble>& rx_y);
double estimate_snr_db(const SymbolFrame& tx, const ReceivedSymbols& rx);

// Nodes/weights for int f(t) e^{-t^2} dt ~= sum w_i f(t_i).
struct GaussHermiteRule {
  std::vector<double> nodes, weights;
};
GaussHermiteRule gauss_hermite(int order);

// Mutual information of the discrete-input AWGN channel at the given SNR for
// a unit-energy constellation, bits per 2D symbol, via 2D Gauss-Hermite
// quadrature (order per axis).
double mi_awgn_bits(double snr_db, const Constellation& constellation, int quad_order = 10);

struct AirResult {
  double per_channel_bps = 0.0;
  double total_bps = 0.0;
};
// Two polarisations at the same MI: per channel 2 * R_s * MI, total over all
// channels.
AirResult air_from_mi(double mi_bits_per_2d, const WdmSpec& wdm);

MetricsReport score_metrics(const SymbolFrame& tx, const ReceivedSymbols& rx,
                            const Constellation& constellation, const WdmSpec& wdm,
                            int quad_order = 10);

}  // namespace mcdbp
