#include "ahnn/learner.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ahnn/errors.hpp"

namespace ahnn {

void TrainConfig::validate() const {
  if (!(eta > 0.0)) throw ConfigError("train.eta must be positive");
  if (epochs < 0) throw ConfigError("train.epochs must be >= 0");
  if (!(sample_period > 0.0)) throw ConfigError("train.sample_period must be positive");
  if (!(success_band > 0.0 && success_band < 1.0)) throw ConfigError("train.success_band must lie in (0, 1)");
  if (init_spread < 0.0) throw ConfigError("train.init_spread must be >= 0");
}

bool TrainConfig::traces(int epoch) const {
  return std::find(trace_epochs.begin(), trace_epochs.end(), epoch) != trace_epochs.end();
}

double delta_w(double target, double output, double input, double eta, double lambda) {
  return 0.5 * eta * lambda * (target - output) * (1.0 - output * output) * input;
}

std::vector<double> infer(const Crossbar& xbar, std::span<const double> x, const NeuronParams& neuron) {
  std::vector<double> y = xbar.preactivations(x);
  for (auto& v : y) v = activate(v, neuron);
  return y;
}

SampleOutcome train_sample(Crossbar& xbar, const Sample& sample, const NeuronParams& neuron,
                           const TrainConfig& config, NoiseSource& noise) {
  SampleOutcome out;
  std::vector<double> x = sample.x;
  noise.perturb_input(x);
  if (noise.spec().variability_mode == VariabilityMode::per_read && noise.spec().device_variability > 0.0) {
    xbar.set_variability(noise.device_factors(xbar.rows() * xbar.cols()));
  }

  ForwardResult fwd = xbar.forward(x);
  out.events = std::move(fwd.read_events);
  out.outputs.resize(fwd.z.size());
  for (std::size_t n = 0; n < fwd.z.size(); ++n) out.outputs[n] = activate(fwd.z[n], neuron);

  Femtoseconds longest = std::max(to_femtoseconds(config.sample_period),
                                  to_femtoseconds(xbar.model().min_update_time()));
  for (std::size_t n = 0; n < xbar.cols(); ++n) {
    const double y = out.outputs[n];
    const double target = sample.target[n];
    for (std::size_t r = 0; r < xbar.rows(); ++r) {
      const double input = r == xbar.bias_row() ? 1.0 : x[r];
      const double delta = noise.perturb_update(delta_w(target, y, input, config.eta, neuron.lambda));
      const std::size_t first = out.events.size();
      const ProgramStatus status = xbar.program(r, n, delta, out.events);
      if (status == ProgramStatus::clamped) ++out.clamp_warnings;
      if (status == ProgramStatus::reset) ++out.resets;
      Femtoseconds busy{0};
      for (std::size_t i = first; i < out.events.size(); ++i) busy += out.events[i].duration;
      longest = std::max(longest, busy);
    }
  }
  out.duration = longest;
  xbar.elapse_idle(to_seconds(out.duration));
  return out;
}

void initialize_weights(Crossbar& xbar, const TrainConfig& config) {
  // Saturated start is a common gate charge; unipolar RRAM pairs instead start
  // from the reset state, both devices at g_min.
  const bool reset_pair = xbar.model().technology() == Technology::rram;
  WeightMatrix w(xbar.rows(), xbar.cols(), reset_pair ? 0.0 : config.init_weight);
  if (config.init == InitMode::random) {
    std::mt19937_64 rng = make_substream(config.seed, Substream::init);
    std::uniform_real_distribution<double> dist(-config.init_spread, config.init_spread);
    const WeightRange range = xbar.weight_range();
    for (std::size_t r = 0; r < w.rows(); ++r) {
      for (std::size_t c = 0; c < w.cols(); ++c) {
        w(r, c) = std::clamp(config.init_spread > 0.0 ? dist(rng) : 0.0, range.min, range.max);
      }
    }
  }
  xbar.set_weights(w);
}

double evaluate(const Crossbar& xbar, std::span<const Sample> samples, const NeuronParams& neuron,
                double success_band) {
  if (samples.empty()) return 0.0;
  const double tol = success_tolerance(success_band);
  std::size_t hits = 0;
  for (const auto& s : samples) {
    const std::vector<double> y = infer(xbar, s.x, neuron);
    bool ok = true;
    for (std::size_t n = 0; n < y.size(); ++n) ok = ok && std::abs(y[n] - s.target[n]) <= tol;
    if (ok) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

std::vector<EpochTrace> run_training(Crossbar& xbar, const Dataset& data, const NeuronParams& neuron,
                                     const TrainConfig& config, NoiseSource& noise, RunLedger& ledger,
                                     const SampleObserver& observer) {
  config.validate();
  std::vector<EpochTrace> traces;
  traces.reserve(static_cast<std::size_t>(config.epochs));
  std::uint64_t clamps = 0;
  std::uint64_t resets = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochTrace trace;
    trace.epoch = epoch;
    const bool record = config.traces(epoch);
    for (std::size_t i = 0; i < data.train.size(); ++i) {
      const Sample& sample = data.train[i];
      SampleOutcome out = train_sample(xbar, sample, neuron, config, noise);
      ledger.record(out.events);
      ledger.advance(out.duration);
      clamps += static_cast<std::uint64_t>(out.clamp_warnings);
      resets += static_cast<std::uint64_t>(out.resets);
      if (record) {
        for (std::size_t n = 0; n < out.outputs.size(); ++n) {
          trace.node_records.push_back({epoch, i + 1, n + 1, out.outputs[n], sample.target[n]});
        }
      }
      if (observer) observer(epoch, i + 1, xbar);
    }
    trace.train_accuracy = evaluate(xbar, data.train, neuron, config.success_band);
    trace.test_accuracy = evaluate(xbar, data.test, neuron, config.success_band);
    trace.cumulative_write_energy = ledger.write_energy();
    trace.cumulative_reset_energy = ledger.reset_energy();
    trace.cumulative_read_energy = ledger.read_energy();
    trace.cumulative_time = ledger.elapsed();
    trace.clamp_warnings = clamps;
    trace.resets = resets;
    traces.push_back(std::move(trace));
  }
  return traces;
}

}  // namespace ahnn
