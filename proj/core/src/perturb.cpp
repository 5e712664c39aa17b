#include "ahnn/perturb.hpp"

#include <algorithm>
#include <string>

#include "ahnn/errors.hpp"

namespace ahnn {

namespace {

void check_fraction(double value, bool allow_wide, const char* name) {
  const double limit = allow_wide ? 1.0 : 0.10;
  if (!(value >= 0.0 && value <= limit + 1e-12)) {
    throw ConfigError(std::string(name) + " must lie in [0, " + std::to_string(limit) + "]");
  }
}

}  // namespace

void NoiseSpec::validate() const {
  check_fraction(device_variability, allow_wide, "noise.device_variability");
  check_fraction(input_noise, allow_wide, "noise.input_noise");
  check_fraction(update_noise, allow_wide, "noise.update_noise");
}

std::mt19937_64 make_substream(std::uint64_t seed, Substream which) {
  const auto id = static_cast<std::uint64_t>(which);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

double draw_factor(double level, NoiseDistribution dist, std::mt19937_64& rng) {
  if (level == 0.0) return 1.0;
  double u = 0.0;
  if (dist == NoiseDistribution::uniform) {
    u = std::uniform_real_distribution<double>(-level, level)(rng);
  } else {
    u = std::normal_distribution<double>(0.0, level)(rng);
  }
  return std::max(0.0, 1.0 + u);
}

std::vector<double> draw_device_factors(const NoiseSpec& spec, std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng = make_substream(spec.seed, Substream::device);
  std::vector<double> factors(rows * cols);
  for (auto& f : factors) f = draw_factor(spec.device_variability, spec.distribution, rng);
  return factors;
}

void perturb_input(std::span<double> x, const NoiseSpec& spec, std::mt19937_64& rng) {
  if (spec.input_noise == 0.0) return;
  for (auto& v : x) v = std::clamp(v * draw_factor(spec.input_noise, spec.distribution, rng), 0.0, 1.0);
}

double perturb_update(double delta, const NoiseSpec& spec, std::mt19937_64& rng) {
  if (spec.update_noise == 0.0) return delta;
  return delta * draw_factor(spec.update_noise, spec.distribution, rng);
}

NoiseSource::NoiseSource(NoiseSpec spec)
    : spec_(spec),
      device_rng_(make_substream(spec.seed, Substream::device)),
      input_rng_(make_substream(spec.seed, Substream::input)),
      update_rng_(make_substream(spec.seed, Substream::update)) {
  spec_.validate();
}

std::vector<double> NoiseSource::device_factors(std::size_t count) {
  std::vector<double> factors(count);
  for (auto& f : factors) f = draw_factor(spec_.device_variability, spec_.distribution, device_rng_);
  return factors;
}

void NoiseSource::perturb_input(std::span<double> x) { ahnn::perturb_input(x, spec_, input_rng_); }

double NoiseSource::perturb_update(double delta) { return ahnn::perturb_update(delta, spec_, update_rng_); }

}  // namespace ahnn
