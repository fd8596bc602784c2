#pragma once

#include "windregime/data.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wr {

/// One weather regime of the synthetic generator: wind speed follows
/// w_t = mean + ar * (w_{t-1} - mean) + noise * eps while the regime is active.
struct RegimeSpec {
  double mean_wind = 8.0;     // m/s
  double ar_coefficient = 0.8;  // in (-1, 1)
  double noise_std = 1.0;     // m/s
  double mean_dwell_hours = 48.0;
  std::optional<double> prevailing_direction_deg;  // direction is pulled towards this while active
};

struct SyntheticOptions {
  Timestamp start = 1514764800;  // 2018-01-01T00:00:00Z
  std::string farm_id = "synthetic";
  double direction_step_deg = 4.0;  // random-walk step of wind direction
  double direction_reversion = 0.15;  // share of the gap to the prevailing direction closed per hour
  double power_noise = 0.02;        // fraction of capacity, operating range only
  double shear_factor = 1.29;       // 100 m wind relative to hub-height input
  double curve_shift = 0.0;         // m/s, shifts the power-curve midpoint
};

struct SyntheticFarm {
  FarmSeries series;
  std::vector<int> regime;  // active regime per hour
};

/// Capacity fraction from the logistic power curve: 0 below cut-in (3 m/s),
/// 1 between rated (12 m/s) and cut-out (25 m/s), 0 above cut-out.
double power_curve_fraction(double wind_speed, double curve_shift = 0.0);

SyntheticFarm generate_synthetic_farm(std::uint64_t seed, const std::vector<RegimeSpec>& regimes,
                                      std::size_t n_hours, double capacity,
                                      const SyntheticOptions& options = {});

}  // namespace wr
