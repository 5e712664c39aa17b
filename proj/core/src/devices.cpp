#include "ahnn/devices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ahnn/errors.hpp"
#include "ahnn/feedback.hpp"

namespace ahnn {

namespace {

constexpr double kRangeTolerance = 1e-12;

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw ConfigError(std::string(name) + " must be strictly positive");
}

void require_ordered(double lo, double hi, const char* what) {
  if (!(lo < hi)) throw ConfigError(std::string(what) + ": lower bound must be below upper bound");
}

// Snaps values within tolerance of an interval endpoint, rejects the rest.
double fit_interval(double value, double lo, double hi, const char* what) {
  const double slack = kRangeTolerance * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (value < lo - slack || value > hi + slack) {
    throw WeightOutOfRange(std::string(what) + " " + std::to_string(value) + " outside [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return std::clamp(value, lo, hi);
}

}  // namespace

std::string_view to_string(Technology tech) {
  switch (tech) {
    case Technology::mosfet:
      return "mosfet";
    case Technology::domain_wall:
      return "domain_wall";
    case Technology::rram:
      return "rram";
    case Technology::ideal:
      return "ideal";
  }
  return "unknown";
}

Technology parse_technology(std::string_view name) {
  if (name == "mosfet") return Technology::mosfet;
  if (name == "domain_wall" || name == "domain-wall" || name == "dw") return Technology::domain_wall;
  if (name == "rram") return Technology::rram;
  if (name == "ideal") return Technology::ideal;
  throw ConfigError("unknown device technology '" + std::string(name) + "'");
}

void MosfetSynapseParams::validate() const {
  require_ordered(v_gs_min, v_gs_max, "mosfet v_gs window");
  require_ordered(g_min, g_max, "mosfet conductance range");
  require_positive(g_min, "mosfet.g_min");
  require_positive(c_gate, "mosfet.c_gate");
  require_positive(pulse_width, "mosfet.pulse_width");
  require_positive(i_pulse_max, "mosfet.i_pulse_max");
  require_positive(tau_retention, "mosfet.tau_retention");
  const double k = slope();
  if (!std::isfinite(k) || k <= 0.0) throw ConfigError("mosfet conductance slope must be finite and positive");
}

void DomainWallParams::validate() const {
  require_ordered(g_min, g_max, "domain_wall conductance range");
  require_positive(g_min, "domain_wall.g_min");
  require_positive(update_time, "domain_wall.update_time");
  if (energy_per_full_sweep < 0.0) throw ConfigError("domain_wall.energy_per_full_sweep must be >= 0");
}

double RramParams::set_increment(double g) const noexcept {
  const double headroom = 1.0 - (g - g_min) / (g_max - g_min);
  if (headroom <= 0.0) return 0.0;
  return delta_g_per_pulse_at_gmin * std::pow(headroom, nonlinearity_gamma);
}

void RramParams::validate() const {
  require_ordered(g_min, g_max, "rram conductance range");
  require_positive(g_min, "rram.g_min");
  require_positive(set_pulse_width, "rram.set_pulse_width");
  require_positive(reset_pulse_width, "rram.reset_pulse_width");
  require_positive(nonlinearity_gamma, "rram.nonlinearity_gamma");
  require_positive(delta_g_per_pulse_at_gmin, "rram.delta_g_per_pulse_at_gmin");
  if (delta_g_per_pulse_at_gmin > g_max - g_min) {
    throw ConfigError("rram.delta_g_per_pulse_at_gmin exceeds the conductance range");
  }
  if (e_set_pulse < 0.0 || e_reset_pulse < 0.0) throw ConfigError("rram pulse energies must be >= 0");
  if (max_pulses_per_update < 1) throw ConfigError("rram.max_pulses_per_update must be >= 1");
}

EnergyEvent synapse_read_energy(double g, double v_ds, double width) {
  EnergyEvent e;
  e.kind = EnergyKind::read;
  e.energy = g * v_ds * v_ds * width;
  e.duration = to_femtoseconds(width);
  return e;
}

// ---------------------------------------------------------------------------
// MOSFET

double mosfet_conductance(const SynapseState& state, const MosfetSynapseParams& params) {
  const auto& s = std::get<MosfetState>(state.device);
  return state.variability_factor * (params.g_min + params.slope() * (s.v_gs - params.v_gs_min));
}

PulseOutcome mosfet_apply_pulse(const SynapseState& state, double i_gate, double width,
                                const MosfetSynapseParams& params) {
  if (std::abs(i_gate) > params.i_pulse_max * (1.0 + 1e-12)) {
    throw OverdrivePulse(i_gate, params.i_pulse_max);
  }
  PulseOutcome out{state, {}};
  const double v_before = std::get<MosfetState>(state.device).v_gs;
  const double v_after =
      std::clamp(v_before + i_gate * width / params.c_gate, params.v_gs_min, params.v_gs_max);
  std::get<MosfetState>(out.state.device).v_gs = v_after;

  out.event.kind = EnergyKind::write;
  out.event.energy = std::abs(i_gate) * 0.5 * (v_before + v_after) * width;
  out.event.duration = to_femtoseconds(width);
  return out;
}

SynapseState mosfet_decay(const SynapseState& state, double elapsed, const MosfetSynapseParams& params) {
  SynapseState out = state;
  if (elapsed <= 0.0 || std::isinf(params.tau_retention)) return out;
  auto& s = std::get<MosfetState>(out.device);
  s.v_gs = params.v_gs_min + (s.v_gs - params.v_gs_min) * std::exp(-elapsed / params.tau_retention);
  return out;
}

MosfetSynapse::MosfetSynapse(MosfetSynapseParams params) : params_(params) { params_.validate(); }

WeightMap MosfetSynapse::default_weight_map() const {
  return {0.5 * (params_.g_min + params_.g_max), 0.5 * (params_.g_max - params_.g_min)};
}

WeightRange MosfetSynapse::weight_range(const WeightMap& map) const {
  return {(params_.g_min - map.g_ref) / map.weight_scale, (params_.g_max - map.g_ref) / map.weight_scale};
}

SynapseState MosfetSynapse::encode(double weight, double variability_factor, const WeightMap& map) const {
  const double g = map.g_ref + map.weight_scale * weight;
  const double v = params_.v_gs_min + (g - params_.g_min) / params_.slope();
  return {MosfetState{fit_interval(v, params_.v_gs_min, params_.v_gs_max, "gate voltage")},
          variability_factor};
}

double MosfetSynapse::decode(const SynapseState& state, const WeightMap& map) const {
  return (mosfet_conductance(state, params_) - map.g_ref) / map.weight_scale;
}

double MosfetSynapse::read_conductance(const SynapseState& state) const {
  return mosfet_conductance(state, params_);
}

double MosfetSynapse::column_current(const SynapseState& state, double v_in, const WeightMap& map) const {
  double g = mosfet_conductance(state, params_);
  if (params_.vds_coefficient != 0.0) g *= 1.0 + params_.vds_coefficient * v_in;
  return g * v_in - map.g_ref * v_in;
}

ProgramStatus MosfetSynapse::program(SynapseState& state, double delta_weight, const WeightMap& map,
                                     DeviceIndex index, std::vector<EnergyEvent>& events) const {
  const GatePulse pulse = pulse_for_delta(delta_weight, params_, map.weight_scale);
  if (pulse.i_gate == 0.0) return ProgramStatus::ok;
  PulseOutcome out = mosfet_apply_pulse(state, pulse.i_gate, pulse.width, params_);
  out.event.device = index;
  state = out.state;
  events.push_back(out.event);
  return pulse.clamped ? ProgramStatus::clamped : ProgramStatus::ok;
}

void MosfetSynapse::decay(SynapseState& state, double elapsed) const {
  state = mosfet_decay(state, elapsed, params_);
}

bool MosfetSynapse::is_volatile() const noexcept { return std::isfinite(params_.tau_retention); }

// ---------------------------------------------------------------------------
// Domain wall

double dw_conductance(const SynapseState& state, const DomainWallParams& params) {
  const auto& s = std::get<DomainWallState>(state.device);
  return state.variability_factor * (params.g_min + s.position * (params.g_max - params.g_min));
}

PulseOutcome dw_program(const SynapseState& state, double delta_weight, const DomainWallParams& params,
                        double weight_scale) {
  PulseOutcome out{state, {}};
  auto& s = std::get<DomainWallState>(out.state.device);
  const double before = s.position;
  s.position = std::clamp(before + delta_weight * weight_scale / (params.g_max - params.g_min), 0.0, 1.0);
  out.event.kind = EnergyKind::write;
  out.event.energy = params.energy_per_full_sweep * std::abs(s.position - before);
  out.event.duration = delta_weight == 0.0 ? Femtoseconds{0} : to_femtoseconds(params.update_time);
  return out;
}

DomainWallSynapse::DomainWallSynapse(DomainWallParams params) : params_(params) { params_.validate(); }

WeightMap DomainWallSynapse::default_weight_map() const {
  return {0.5 * (params_.g_min + params_.g_max), 0.5 * (params_.g_max - params_.g_min)};
}

WeightRange DomainWallSynapse::weight_range(const WeightMap& map) const {
  return {(params_.g_min - map.g_ref) / map.weight_scale, (params_.g_max - map.g_ref) / map.weight_scale};
}

SynapseState DomainWallSynapse::encode(double weight, double variability_factor, const WeightMap& map) const {
  const double p = (map.g_ref + map.weight_scale * weight - params_.g_min) / (params_.g_max - params_.g_min);
  return {DomainWallState{fit_interval(p, 0.0, 1.0, "wall position")}, variability_factor};
}

double DomainWallSynapse::decode(const SynapseState& state, const WeightMap& map) const {
  return (dw_conductance(state, params_) - map.g_ref) / map.weight_scale;
}

double DomainWallSynapse::read_conductance(const SynapseState& state) const {
  return dw_conductance(state, params_);
}

double DomainWallSynapse::column_current(const SynapseState& state, double v_in, const WeightMap& map) const {
  return (dw_conductance(state, params_) - map.g_ref) * v_in;
}

ProgramStatus DomainWallSynapse::program(SynapseState& state, double delta_weight, const WeightMap& map,
                                         DeviceIndex index, std::vector<EnergyEvent>& events) const {
  if (delta_weight == 0.0) return ProgramStatus::ok;
  PulseOutcome out = dw_program(state, delta_weight, params_, map.weight_scale);
  out.event.device = index;
  state = out.state;
  events.push_back(out.event);
  return ProgramStatus::ok;
}

// ---------------------------------------------------------------------------
// RRAM pair

namespace {

struct Burst {
  double g = 0.0;
  int pulses = 0;
  bool realized = false;
};

// Set pulses until the accumulated gain is within half a step of `target`.
Burst set_burst(double g, double target, const RramParams& params) {
  Burst b{g, 0, false};
  double gained = 0.0;
  while (true) {
    const double inc = params.set_increment(b.g);
    if (gained + 0.5 * inc >= target) {
      b.realized = true;
      return b;
    }
    if (b.pulses == params.max_pulses_per_update || inc <= 0.0) return b;
    b.g = std::min(b.g + inc, params.g_max);
    gained += inc;
    ++b.pulses;
  }
}

EnergyEvent set_event(int pulses, const RramParams& params, DeviceIndex index) {
  EnergyEvent e;
  e.kind = EnergyKind::write;
  e.energy = pulses * params.e_set_pulse;
  e.duration = Femtoseconds{pulses * to_femtoseconds(params.set_pulse_width).count()};
  e.device = index;
  return e;
}

}  // namespace

RramProgramOutcome rram_program(const SynapseState& state, double delta_weight, const RramParams& params,
                                double weight_scale) {
  RramProgramOutcome out{state, {}, false};
  if (delta_weight == 0.0) return out;
  auto& pair = std::get<RramPairState>(out.state.device);
  const double target = std::abs(delta_weight) * weight_scale;
  double& device = delta_weight > 0.0 ? pair.g_plus : pair.g_minus;

  const Burst burst = set_burst(device, target, params);
  if (burst.realized) {
    device = burst.g;
    if (burst.pulses > 0) out.events.push_back(set_event(burst.pulses, params, {}));
    return out;
  }

  // Saturated: reset both devices and rewrite the intended weight from g_min.
  const double w_span = (params.g_max - params.g_min) / weight_scale;
  const double previous = (pair.g_plus - pair.g_minus) / weight_scale;
  const double wanted = std::clamp(previous + delta_weight, -w_span, w_span);
  pair.g_plus = params.g_min;
  pair.g_minus = params.g_min;
  for (int i = 0; i < 2; ++i) {
    EnergyEvent e;
    e.kind = EnergyKind::reset;
    e.energy = params.e_reset_pulse;
    e.duration = to_femtoseconds(params.reset_pulse_width);
    out.events.push_back(e);
  }
  out.reset = true;
  double& rewrite = wanted > 0.0 ? pair.g_plus : pair.g_minus;
  const Burst fresh = set_burst(params.g_min, std::abs(wanted) * weight_scale, params);
  rewrite = fresh.g;
  if (fresh.pulses > 0) out.events.push_back(set_event(fresh.pulses, params, {}));
  return out;
}

RramSynapse::RramSynapse(RramParams params) : params_(params) { params_.validate(); }

WeightMap RramSynapse::default_weight_map() const { return {0.0, params_.g_max - params_.g_min}; }

WeightRange RramSynapse::weight_range(const WeightMap& map) const {
  const double span = (params_.g_max - params_.g_min) / map.weight_scale;
  return {-span, span};
}

SynapseState RramSynapse::encode(double weight, double variability_factor, const WeightMap& map) const {
  const WeightRange range = weight_range(map);
  const double w = fit_interval(weight, range.min, range.max, "weight");
  RramPairState pair{params_.g_min, params_.g_min};
  if (w > 0.0) {
    pair.g_plus = std::min(params_.g_min + w * map.weight_scale, params_.g_max);
  } else if (w < 0.0) {
    pair.g_minus = std::min(params_.g_min - w * map.weight_scale, params_.g_max);
  }
  return {pair, variability_factor};
}

double RramSynapse::decode(const SynapseState& state, const WeightMap& map) const {
  const auto& pair = std::get<RramPairState>(state.device);
  return state.variability_factor * (pair.g_plus - pair.g_minus) / map.weight_scale;
}

double RramSynapse::read_conductance(const SynapseState& state) const {
  const auto& pair = std::get<RramPairState>(state.device);
  return state.variability_factor * (pair.g_plus + pair.g_minus);
}

double RramSynapse::column_current(const SynapseState& state, double v_in, const WeightMap& /*map*/) const {
  const auto& pair = std::get<RramPairState>(state.device);
  return state.variability_factor * (pair.g_plus - pair.g_minus) * v_in;
}

ProgramStatus RramSynapse::program(SynapseState& state, double delta_weight, const WeightMap& map,
                                   DeviceIndex index, std::vector<EnergyEvent>& events) const {
  RramProgramOutcome out = rram_program(state, delta_weight, params_, map.weight_scale);
  state = out.state;
  for (auto& e : out.events) {
    e.device = index;
    events.push_back(e);
  }
  return out.reset ? ProgramStatus::reset : ProgramStatus::ok;
}

// ---------------------------------------------------------------------------
// Ideal

IdealSynapse::IdealSynapse(IdealSynapseParams params) : params_(params) {}

WeightMap IdealSynapse::default_weight_map() const {
  return {0.5 * (params_.g_min + params_.g_max), 0.5 * (params_.g_max - params_.g_min)};
}

WeightRange IdealSynapse::weight_range(const WeightMap& /*map*/) const {
  return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

SynapseState IdealSynapse::encode(double weight, double variability_factor, const WeightMap& /*map*/) const {
  return {IdealState{weight}, variability_factor};
}

double IdealSynapse::decode(const SynapseState& state, const WeightMap& map) const {
  const double w = std::get<IdealState>(state.device).weight;
  if (state.variability_factor == 1.0) return w;
  return (state.variability_factor * (map.g_ref + map.weight_scale * w) - map.g_ref) / map.weight_scale;
}

double IdealSynapse::read_conductance(const SynapseState& state) const {
  const WeightMap map = default_weight_map();
  return state.variability_factor * (map.g_ref + map.weight_scale * std::get<IdealState>(state.device).weight);
}

double IdealSynapse::column_current(const SynapseState& state, double v_in, const WeightMap& map) const {
  return decode(state, map) * map.weight_scale * v_in;
}

ProgramStatus IdealSynapse::program(SynapseState& state, double delta_weight, const WeightMap& /*map*/,
                                    DeviceIndex /*index*/, std::vector<EnergyEvent>& /*events*/) const {
  std::get<IdealState>(state.device).weight += delta_weight;
  return ProgramStatus::ok;
}

}  // namespace ahnn
