#pragma once

#include <cmath>

namespace mcdbp {

// Fixed physical constants (SI units).
struct PhysicalConstants {
  double c = 2.998e8;    // speed of light, m/s
  double h = 6.626e-34;  // Planck constant, J*s
};

inline constexpr PhysicalConstants kPhysics{};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// Power attenuation coefficient: dB/km -> Np/m, P(z) = P(0) exp(-alpha z).
inline double db_per_km_to_np_per_m(double db_per_km) {
  return db_per_km * std::log(10.0) / 10.0 / 1000.0;
}

}  // namespace mcdbp
