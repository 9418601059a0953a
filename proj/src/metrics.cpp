#include "mcdbp/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mcdbp {

std::string MetricsReport::csv_header() {
  return "snr_db,mi_bits,air_per_channel_gbps,air_total_tbps,n_symbols";
}

std::string MetricsReport::csv_row() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%zu", snr_db, mi_bits_per_2d,
                air_per_channel_bps / 1e9, air_total_bps / 1e12, n_symbols_used);
  return buf;
}

std::string MetricsReport::to_text() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "snr_db = %.6f\nmi_bits_per_2d_symbol = %.6f\nair_per_channel_gbps = %.6f\n"
                "air_total_tbps = %.6f\nn_symbols_used = %zu\n",
                snr_db, mi_bits_per_2d, air_per_channel_bps / 1e9, air_total_bps / 1e12,
                n_symbols_used);
  return buf;
}

namespace {

double pol_snr_linear(const std::vector<cdouble>& tx, const std::vector<cdouble>& rx) {
  cdouble cross{};
  double tx_power = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    cross += std::conj(tx[i]) * rx[i];
    tx_power += std::norm(tx[i]);
  }
  if (tx_power <= 0.0) throw std::invalid_argument("estimate_snr: zero transmit power");
  const cdouble h = cross / tx_power;
  double err = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) err += std::norm(rx[i] - h * tx[i]);
  const double signal = std::norm(h) * tx_power;
  if (err <= 0.0) return db_to_linear(kSnrCapDb);
  return std::min(signal / err, db_to_linear(kSnrCapDb));
}

}  // namespace

double estimate_snr_db(const std::vector<cdouble>& tx_x, const std::vector<cdouble>& tx_y,
                       const std::vector<cdouble>& rx_x, const std::vector<cdouble>& rx_y) {
  if (tx_x.size() != rx_x.size() || tx_y.size() != rx_y.size() || tx_x.size() != tx_y.size())
    throw std::invalid_argument("estimate_snr: mismatched sequence lengths");
  if (tx_x.size() < 1000)
    throw std::invalid_argument("estimate_snr: need at least 1000 symbols (data-aided estimate)");
  const double snr = 0.5 * (pol_snr_linear(tx_x, rx_x) + pol_snr_linear(tx_y, rx_y));
  return std::min(linear_to_db(snr), kSnrCapDb);
}

double estimate_snr_db(const SymbolFrame& tx, const ReceivedSymbols& rx) {
  return estimate_snr_db(tx.x_pol, tx.y_pol, rx.x_pol, rx.y_pol);
}

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 64) throw std::invalid_argument("gauss_hermite: order out of range");
  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  // Orthonormal Hermite recurrence (weight e^{-x^2}); Newton iteration from
  // interlacing initial guesses. p_0 = pi^{-1/4}.
  auto eval = [order](double x, double& p, double& dp) {
    double pm1 = 0.0;
    double pk = std::pow(M_PI, -0.25);
    for (int k = 0; k < order; ++k) {
      const double pk1 = x * std::sqrt(2.0 / (k + 1)) * pk -
                         std::sqrt(double(k) / (k + 1)) * pm1;
      pm1 = pk;
      pk = pk1;
    }
    p = pk;
    // d/dx p_n = sqrt(2n) p_{n-1}
    dp = std::sqrt(2.0 * order) * pm1;
  };

  // Largest root initial guess, then march inward (Stroud & Secrest style).
  double x = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    if (i == 1) {
      x -= 1.14 * std::pow(double(order), 0.426) / x;
    } else if (i == 2) {
      x = 1.86 * x - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      x = 1.91 * x - 0.91 * rule.nodes[1];
    } else if (i > 3) {
      x = 2.0 * x - rule.nodes[i - 2];
    }
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      eval(x, p, dp);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    eval(x, p, dp);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / (dp * dp);
    rule.nodes[order - 1 - i] = -x;
    rule.weights[order - 1 - i] = rule.weights[i];
  }
  if (order % 2 == 1) {
    rule.nodes[order / 2] = 0.0;
    double p = 0.0, dp = 1.0;
    eval(0.0, p, dp);
    rule.weights[order / 2] = 2.0 / (dp * dp);
  }
  // Nodes ascend for cache-friendly loops.
  for (int i = 0; i < order / 2; ++i) {
    std::swap(rule.nodes[i], rule.nodes[order - 1 - i]);
    std::swap(rule.weights[i], rule.weights[order - 1 - i]);
  }
  return rule;
}

double mi_awgn_bits(double snr_db, const Constellation& constellation, int quad_order) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("mi_awgn: SNR must be finite");
  const double snr = db_to_linear(std::min(snr_db, kSnrCapDb));
  const double sigma2 = 1.0 / snr;  // E|z|^2 for the unit-energy constellation
  const double sigma = std::sqrt(sigma2);
  const int m = constellation.order;
  const auto& pts = constellation.points;
  const GaussHermiteRule rule = gauss_hermite(quad_order);

  // MI = log2 M - (1/M) sum_i E_z[ log2 sum_j exp((-|x_i - x_j + z|^2 + |z|^2)/sigma^2) ],
  // z ~ CN(0, sigma^2); with z = sigma (t_a + i t_b) the expectation becomes a
  // 2D Gauss-Hermite sum with weights w_a w_b / pi.
  const double log2e = 1.4426950408889634074;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < quad_order; ++a) {
      for (int b = 0; b < quad_order; ++b) {
        const cdouble z{sigma * rule.nodes[a], sigma * rule.nodes[b]};
        const double z2 = std::norm(z);
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
          const cdouble d = pts[i] - pts[j] + z;
          sum += std::exp((z2 - std::norm(d)) / sigma2);
        }
        acc += rule.weights[a] * rule.weights[b] * std::log(sum) * log2e;
      }
    }
  }
  acc /= M_PI * m;
  const double mi = std::log2(double(m)) - acc;
  return std::max(0.0, mi);
}

AirResult air_from_mi(double mi_bits_per_2d, const WdmSpec& wdm) {
  const double ceiling = std::log2(double(format_order(wdm.format)));
  if (mi_bits_per_2d < 0.0 || mi_bits_per_2d > ceiling + 1e-9)
    throw std::invalid_argument("air_from_mi: MI outside [0, log2 M]");
  AirResult r;
  r.per_channel_bps = 2.0 * wdm.symbol_rate_hz * mi_bits_per_2d;  // two polarisations
  r.total_bps = wdm.n_channels * r.per_channel_bps;
  return r;
}

MetricsReport score_metrics(const SymbolFrame& tx, const ReceivedSymbols& rx,
                            const Constellation& constellation, const WdmSpec& wdm,
                            int quad_order) {
  MetricsReport report;
  report.snr_db = estimate_snr_db(tx, rx);
  report.mi_bits_per_2d = mi_awgn_bits(report.snr_db, constellation, quad_order);
  const AirResult air = air_from_mi(report.mi_bits_per_2d, wdm);
  report.air_per_channel_bps = air.per_channel_bps;
  report.air_total_bps = air.total_bps;
  report.n_symbols_used = tx.x_pol.size();
  return report;
}

}  // namespace mcdbp
