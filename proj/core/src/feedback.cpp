#include "ahnn/feedback.hpp"

#include <cmath>

namespace ahnn {

GatePulse pulse_for_delta(double delta, const MosfetSynapseParams& params, double weight_scale) {
  GatePulse pulse;
  pulse.width = params.pulse_width;
  const double dv_gs = delta * weight_scale / params.slope();
  double current = dv_gs * params.c_gate / params.pulse_width;
  if (std::abs(current) > params.i_pulse_max * (1.0 + 1e-12)) {
    current = std::copysign(params.i_pulse_max, current);
    pulse.clamped = true;
  }
  pulse.i_gate = current;
  return pulse;
}

}  // namespace ahnn
