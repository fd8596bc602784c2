#include "windregime/synthetic.hpp"

#include "windregime/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace wr {

namespace {

constexpr double kCutIn = 3.0;
constexpr double kRated = 12.0;
constexpr double kCutOut = 25.0;
constexpr double kSteepness = 0.9;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void validate(const std::vector<RegimeSpec>& regimes) {
  if (regimes.size() < 2) throw Error(ErrorCode::InvalidRegimeSpec, "need at least 2 regimes");
  for (const auto& r : regimes) {
    if (!(r.ar_coefficient > -1.0 && r.ar_coefficient < 1.0) || !(r.noise_std >= 0.0) ||
        !(r.mean_wind >= 0.0) || !(r.mean_dwell_hours >= 1.0) || !std::isfinite(r.mean_wind)) {
      throw Error(ErrorCode::InvalidRegimeSpec, "regime parameters out of range");
    }
  }
}

}  // namespace

double power_curve_fraction(double wind_speed, double curve_shift) {
  if (wind_speed < kCutIn || wind_speed > kCutOut) return 0.0;
  if (wind_speed >= kRated) return 1.0;
  const double mid = 0.5 * (kCutIn + kRated) + curve_shift;
  const double lo = logistic(kSteepness * (kCutIn - mid));
  const double hi = logistic(kSteepness * (kRated - mid));
  return std::clamp((logistic(kSteepness * (wind_speed - mid)) - lo) / (hi - lo), 0.0, 1.0);
}

SyntheticFarm generate_synthetic_farm(std::uint64_t seed, const std::vector<RegimeSpec>& regimes,
                                      std::size_t n_hours, double capacity,
                                      const SyntheticOptions& options) {
  validate(regimes);
  if (!(capacity > 0.0)) throw Error(ErrorCode::InvalidArgument, "capacity must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  SyntheticFarm farm;
  farm.series.farm_id = options.farm_id;
  farm.series.capacity = capacity;
  farm.series.records.reserve(n_hours);
  farm.regime.reserve(n_hours);

  auto regime = static_cast<int>(uniform(rng) * static_cast<double>(regimes.size())) %
                static_cast<int>(regimes.size());
  double wind = regimes[static_cast<std::size_t>(regime)].mean_wind;
  double direction = 360.0 * uniform(rng);

  for (std::size_t t = 0; t < n_hours; ++t) {
    const auto& spec = regimes[static_cast<std::size_t>(regime)];
    if (t > 0 && uniform(rng) < 1.0 / spec.mean_dwell_hours) {
      const auto offset = 1 + static_cast<int>(uniform(rng) * static_cast<double>(regimes.size() - 1)) %
                                  static_cast<int>(regimes.size() - 1);
      regime = (regime + offset) % static_cast<int>(regimes.size());
    }
    const auto& active = regimes[static_cast<std::size_t>(regime)];
    wind = active.mean_wind + active.ar_coefficient * (wind - active.mean_wind) + active.noise_std * normal(rng);
    wind = std::max(wind, 0.0);
    double step = options.direction_step_deg * normal(rng);
    if (active.prevailing_direction_deg) {
      const double gap = std::remainder(*active.prevailing_direction_deg - direction, 360.0);
      step += options.direction_reversion * gap;
    }
    direction = std::fmod(std::fmod(direction + step, 360.0) + 360.0, 360.0);

    MeteoRecord rec;
    rec.timestamp = options.start + static_cast<Timestamp>(t) * kSecondsPerHour;
    rec.wind_speed = wind;
    // Charnock relation with friction velocity u* ~ 0.035 U.
    const double ustar = 0.035 * wind * (1.0 + 0.05 * normal(rng));
    rec.roughness = 0.011 * ustar * ustar / 9.81;
    rec.wind_direction = direction;
    const double theta = direction * std::numbers::pi / 180.0;
    const double speed100 = options.shear_factor * wind;
    rec.u100 = -speed100 * std::sin(theta);
    rec.v100 = -speed100 * std::cos(theta);

    double fraction = power_curve_fraction(wind, options.curve_shift);
    const double noise = options.power_noise * normal(rng);
    if (wind > kCutIn && wind < kCutOut) fraction = std::clamp(fraction + noise, 0.0, 1.0);
    rec.power = capacity * fraction;

    farm.series.records.push_back(rec);
    farm.regime.push_back(regime);
  }
  return farm;
}

}  // namespace wr
