#pragma once

namespace ahnn {

struct NeuronParams {
  double lambda = 2.0;
  double gain_error = 0.0;  // multiplicative deviation of the analog transfer curve

  void validate() const;
};

// Scaled logistic, 2 / (1 + exp(-lambda z)) - 1, in (-1, 1).
double activate(double z, const NeuronParams& p);

// dy/dz written in terms of the output: (lambda / 2)(1 - y^2).
double activate_derivative(double y, const NeuronParams& p);

}  // namespace ahnn
