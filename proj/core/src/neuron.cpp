#include "ahnn/neuron.hpp"

#include <algorithm>
#include <cmath>

#include "ahnn/errors.hpp"

namespace ahnn {

void NeuronParams::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("neuron.lambda must be positive");
  if (!(std::abs(gain_error) < 0.2)) throw ConfigError("neuron.gain_error must satisfy |gain_error| < 0.2");
}

double activate(double z, const NeuronParams& p) {
  const double y = (1.0 + p.gain_error) * (2.0 / (1.0 + std::exp(-p.lambda * z)) - 1.0);
  return std::clamp(y, -1.0, 1.0);
}

double activate_derivative(double y, const NeuronParams& p) { return 0.5 * p.lambda * (1.0 - y * y); }

}  // namespace ahnn
