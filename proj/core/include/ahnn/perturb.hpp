#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ahnn {

enum class NoiseDistribution { uniform, gaussian };
enum class VariabilityMode { static_mismatch, per_read };

struct NoiseSpec {
  double device_variability = 0.0;  // fractional conductance mismatch
  double input_noise = 0.0;         // fractional drain-voltage noise on training inputs
  double update_noise = 0.0;        // fractional error of the computed weight update
  std::uint64_t seed = 42;
  NoiseDistribution distribution = NoiseDistribution::uniform;
  VariabilityMode variability_mode = VariabilityMode::static_mismatch;
  bool allow_wide = false;  // permit fractions above 0.10

  void validate() const;
  bool noiseless() const noexcept {
    return device_variability == 0.0 && input_noise == 0.0 && update_noise == 0.0;
  }
};

enum class Substream : std::uint64_t { device = 1, input = 2, update = 3, init = 4 };

std::mt19937_64 make_substream(std::uint64_t seed, Substream which);

// Multiplicative factor 1 + u with u drawn from the configured distribution of
// half-width (uniform) or standard deviation (gaussian) `level`; never negative.
double draw_factor(double level, NoiseDistribution dist, std::mt19937_64& rng);

// Static mismatch grid, one factor per device, from the device substream.
std::vector<double> draw_device_factors(const NoiseSpec& spec, std::size_t rows, std::size_t cols);

void perturb_input(std::span<double> x, const NoiseSpec& spec, std::mt19937_64& rng);
double perturb_update(double delta, const NoiseSpec& spec, std::mt19937_64& rng);

// Owns the three named substreams of one run.
class NoiseSource {
 public:
  explicit NoiseSource(NoiseSpec spec);

  const NoiseSpec& spec() const noexcept { return spec_; }
  std::vector<double> device_factors(std::size_t count);
  void perturb_input(std::span<double> x);
  double perturb_update(double delta);

 private:
  NoiseSpec spec_;
  std::mt19937_64 device_rng_;
  std::mt19937_64 input_rng_;
  std::mt19937_64 update_rng_;
};

}  // namespace ahnn
