#pragma once

#include <limits>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "ahnn/energy.hpp"

namespace ahnn {

enum class Technology { mosfet, domain_wall, rram, ideal };

std::string_view to_string(Technology tech);
Technology parse_technology(std::string_view name);

// Conventional MOSFET synapse: the weight lives as charge on the gate
// capacitance, read out as a drain-source conductance that is affine in V_GS
// over the operating window.
struct MosfetSynapseParams {
  double v_gs_min = 0.6;         // V
  double v_gs_max = 1.6;         // V
  double g_min = 1.0e-3;         // S at v_gs_min
  double g_max = 6.0e-3;         // S at v_gs_max
  double c_gate = 1.0e-15;       // F
  double pulse_width = 1.0e-9;   // s
  double i_pulse_max = 132e-9;   // A, current source compliance
  double tau_retention = 1.0e-3; // s; infinity disables leakage
  // Optional first-order V_DS dependence, G(V_GS, V_DS) = G(V_GS) * (1 + c * V_DS).
  // Zero keeps the crossbar exactly linear in its inputs.
  double vds_coefficient = 0.0;  // 1/V

  double slope() const noexcept { return (g_max - g_min) / (v_gs_max - v_gs_min); }
  void validate() const;
};

// Behavioral domain-wall synapse: conductance linear in wall position.
struct DomainWallParams {
  double g_min = 1.0e-3;
  double g_max = 6.0e-3;
  double update_time = 3.0e-9;              // s per programming step
  double energy_per_full_sweep = 4.0e-17;   // J to move the wall across [0, 1]

  void validate() const;
};

// Differential pair of unipolar, saturating RRAM devices.
struct RramParams {
  double g_min = 1.0e-6;
  double g_max = 1.0e-4;
  double set_pulse_width = 200e-9;
  double reset_pulse_width = 6.0e-6;
  double nonlinearity_gamma = 2.0;
  double delta_g_per_pulse_at_gmin = 9.9e-7;
  double e_set_pulse = 1.0e-14;    // J
  double e_reset_pulse = 1.0e-10;  // J
  int max_pulses_per_update = 2000;

  // Conductance gained by one set pulse applied at conductance g.
  double set_increment(double g) const noexcept;
  void validate() const;
};

// Reference device with no physical limits; weights are stored verbatim.
struct IdealSynapseParams {
  double g_min = 1.0e-3;
  double g_max = 6.0e-3;
  double update_time = 1.0e-9;
};

struct MosfetState {
  double v_gs = 0.6;
};
struct DomainWallState {
  double position = 0.0;  // [0, 1]
};
struct RramPairState {
  double g_plus = 0.0;
  double g_minus = 0.0;
};
struct IdealState {
  double weight = 0.0;
};

using DeviceState = std::variant<MosfetState, DomainWallState, RramPairState, IdealState>;

struct SynapseState {
  DeviceState device;
  double variability_factor = 1.0;  // static multiplicative mismatch on conductance
};

// ---- MOSFET primitives ----

double mosfet_conductance(const SynapseState& state, const MosfetSynapseParams& params);

struct PulseOutcome {
  SynapseState state;
  EnergyEvent event;
};

// Positive current charges the gate. Throws OverdrivePulse beyond compliance.
PulseOutcome mosfet_apply_pulse(const SynapseState& state, double i_gate, double width,
                                const MosfetSynapseParams& params);

// Single-pole leak of the gate charge toward the v_gs_min floor.
SynapseState mosfet_decay(const SynapseState& state, double elapsed,
                          const MosfetSynapseParams& params);

// ---- domain wall ----

double dw_conductance(const SynapseState& state, const DomainWallParams& params);
PulseOutcome dw_program(const SynapseState& state, double delta_weight,
                        const DomainWallParams& params, double weight_scale);

// ---- RRAM pair ----

struct RramProgramOutcome {
  SynapseState state;
  std::vector<EnergyEvent> events;
  bool reset = false;
};

// Positive deltas pulse g_plus, negative ones g_minus. When the chosen device
// cannot absorb the increment the pair is reset to g_min and rewritten to the
// previous effective weight plus delta.
RramProgramOutcome rram_program(const SynapseState& state, double delta_weight,
                                const RramParams& params, double weight_scale);

EnergyEvent synapse_read_energy(double g, double v_ds, double width);

// ---- common interface ----

// Maps algorithmic weights to conductance offsets: w = (G - g_ref) / weight_scale.
struct WeightMap {
  double g_ref = 0.0;
  double weight_scale = 1.0;
};

struct WeightRange {
  double min = -1.0;
  double max = 1.0;
};

enum class ProgramStatus { ok, clamped, reset };

class SynapseModel {
 public:
  virtual ~SynapseModel() = default;

  virtual Technology technology() const noexcept = 0;
  virtual WeightMap default_weight_map() const = 0;
  virtual WeightRange weight_range(const WeightMap& map) const = 0;

  // Device state whose nominal (factor 1) conductance represents `weight`.
  virtual SynapseState encode(double weight, double variability_factor,
                              const WeightMap& map) const = 0;
  // Effective weight seen by the column, including the mismatch factor.
  virtual double decode(const SynapseState& state, const WeightMap& map) const = 0;

  // Total conductance of the synapse device(s) between drain and source.
  virtual double read_conductance(const SynapseState& state) const = 0;
  // Net current into the column from one synapse and its reference path.
  virtual double column_current(const SynapseState& state, double v_in,
                                const WeightMap& map) const = 0;

  virtual ProgramStatus program(SynapseState& state, double delta_weight, const WeightMap& map,
                                DeviceIndex index, std::vector<EnergyEvent>& events) const = 0;

  virtual void decay(SynapseState& /*state*/, double /*elapsed*/) const {}
  virtual bool is_volatile() const noexcept { return false; }

  // Shortest wall-clock time one training sample can take on this device.
  virtual double min_update_time() const noexcept = 0;
};

class MosfetSynapse final : public SynapseModel {
 public:
  explicit MosfetSynapse(MosfetSynapseParams params = {});

  Technology technology() const noexcept override { return Technology::mosfet; }
  WeightMap default_weight_map() const override;
  WeightRange weight_range(const WeightMap& map) const override;
  SynapseState encode(double weight, double variability_factor, const WeightMap& map) const override;
  double decode(const SynapseState& state, const WeightMap& map) const override;
  double read_conductance(const SynapseState& state) const override;
  double column_current(const SynapseState& state, double v_in, const WeightMap& map) const override;
  ProgramStatus program(SynapseState& state, double delta_weight, const WeightMap& map,
                        DeviceIndex index, std::vector<EnergyEvent>& events) const override;
  void decay(SynapseState& state, double elapsed) const override;
  bool is_volatile() const noexcept override;
  double min_update_time() const noexcept override { return params_.pulse_width; }

  const MosfetSynapseParams& params() const noexcept { return params_; }

 private:
  MosfetSynapseParams params_;
};

class DomainWallSynapse final : public SynapseModel {
 public:
  explicit DomainWallSynapse(DomainWallParams params = {});

  Technology technology() const noexcept override { return Technology::domain_wall; }
  WeightMap default_weight_map() const override;
  WeightRange weight_range(const WeightMap& map) const override;
  SynapseState encode(double weight, double variability_factor, const WeightMap& map) const override;
  double decode(const SynapseState& state, const WeightMap& map) const override;
  double read_conductance(const SynapseState& state) const override;
  double column_current(const SynapseState& state, double v_in, const WeightMap& map) const override;
  ProgramStatus program(SynapseState& state, double delta_weight, const WeightMap& map,
                        DeviceIndex index, std::vector<EnergyEvent>& events) const override;
  double min_update_time() const noexcept override { return params_.update_time; }

  const DomainWallParams& params() const noexcept { return params_; }

 private:
  DomainWallParams params_;
};

class RramSynapse final : public SynapseModel {
 public:
  explicit RramSynapse(RramParams params = {});

  Technology technology() const noexcept override { return Technology::rram; }
  WeightMap default_weight_map() const override;
  WeightRange weight_range(const WeightMap& map) const override;
  SynapseState encode(double weight, double variability_factor, const WeightMap& map) const override;
  double decode(const SynapseState& state, const WeightMap& map) const override;
  double read_conductance(const SynapseState& state) const override;
  double column_current(const SynapseState& state, double v_in, const WeightMap& map) const override;
  ProgramStatus program(SynapseState& state, double delta_weight, const WeightMap& map,
                        DeviceIndex index, std::vector<EnergyEvent>& events) const override;
  double min_update_time() const noexcept override { return params_.set_pulse_width; }

  const RramParams& params() const noexcept { return params_; }

 private:
  RramParams params_;
};

class IdealSynapse final : public SynapseModel {
 public:
  explicit IdealSynapse(IdealSynapseParams params = {});

  Technology technology() const noexcept override { return Technology::ideal; }
  WeightMap default_weight_map() const override;
  WeightRange weight_range(const WeightMap& map) const override;
  SynapseState encode(double weight, double variability_factor, const WeightMap& map) const override;
  double decode(const SynapseState& state, const WeightMap& map) const override;
  double read_conductance(const SynapseState& state) const override;
  double column_current(const SynapseState& state, double v_in, const WeightMap& map) const override;
  ProgramStatus program(SynapseState& state, double delta_weight, const WeightMap& map,
                        DeviceIndex index, std::vector<EnergyEvent>& events) const override;
  double min_update_time() const noexcept override { return params_.update_time; }

 private:
  IdealSynapseParams params_;
};

}  // namespace ahnn
