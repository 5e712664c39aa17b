#pragma once

#include "ahnn/devices.hpp"

namespace ahnn {

// Output of the voltage-controlled current source driving one gate.
struct GatePulse {
  double i_gate = 0.0;  // A, positive charges the gate
  double width = 0.0;   // s
  bool clamped = false; // request exceeded compliance and was limited
};

// Gate current whose fixed-width pulse moves the conductance by exactly
// weight_scale * delta (nominal device), limited to the source compliance.
GatePulse pulse_for_delta(double delta, const MosfetSynapseParams& params, double weight_scale);

}  // namespace ahnn
