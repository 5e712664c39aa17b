#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ahnn/crossbar.hpp"
#include "ahnn/dataio.hpp"
#include "ahnn/energy.hpp"
#include "ahnn/neuron.hpp"
#include "ahnn/perturb.hpp"

namespace ahnn {

enum class InitMode { saturated, random };

struct TrainConfig {
  double eta = 0.02;
  int epochs = 100;
  double sample_period = 1.0e-9;  // s per training sample
  double success_band = 0.40;     // fraction of the 2-unit target swing
  std::uint64_t seed = 42;
  InitMode init = InitMode::saturated;
  // Common starting weight; 0.4 is V_GS = 1.3 V on the default MOSFET.
  double init_weight = 0.4;
  double init_spread = 0.1;  // half-width of the random initialization
  std::vector<int> trace_epochs = {2, 10, 100};

  void validate() const;
  bool traces(int epoch) const;
};

struct NodeRecord {
  int epoch = 0;
  std::size_t sample = 0;
  std::size_t node = 0;
  double y = 0.0;
  double target = 0.0;
};

struct EpochTrace {
  int epoch = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double cumulative_write_energy = 0.0;
  double cumulative_reset_energy = 0.0;
  double cumulative_read_energy = 0.0;
  Femtoseconds cumulative_time{0};
  std::uint64_t clamp_warnings = 0;
  std::uint64_t resets = 0;
  std::vector<NodeRecord> node_records;
};

// Weight increment (eta lambda / 2)(Y - y)(1 - y^2) x applied as w += delta,
// which descends the squared error 0.5 (Y - y)^2. Use x = 1 for the bias.
double delta_w(double target, double output, double input, double eta, double lambda);

// Absolute per-node tolerance on the +-1 output scale.
inline double success_tolerance(double success_band) { return 2.0 * success_band; }

struct SampleOutcome {
  std::vector<double> outputs;
  std::vector<EnergyEvent> events;  // reads, writes and resets
  Femtoseconds duration{0};
  int clamp_warnings = 0;
  int resets = 0;
};

// Forward pass, one programming operation per synapse (bias row included)
// and leakage over the sample's duration.
SampleOutcome train_sample(Crossbar& xbar, const Sample& sample, const NeuronParams& neuron,
                           const TrainConfig& config, NoiseSource& noise);

void initialize_weights(Crossbar& xbar, const TrainConfig& config);

// Called after every committed sample with the 1-based epoch and sample index.
using SampleObserver = std::function<void(int epoch, std::size_t sample, const Crossbar& xbar)>;

std::vector<EpochTrace> run_training(Crossbar& xbar, const Dataset& data, const NeuronParams& neuron,
                                     const TrainConfig& config, NoiseSource& noise, RunLedger& ledger,
                                     const SampleObserver& observer = {});

// Fraction of samples whose every output node lies within the success band.
double evaluate(const Crossbar& xbar, std::span<const Sample> samples, const NeuronParams& neuron,
                double success_band);

std::vector<double> infer(const Crossbar& xbar, std::span<const double> x, const NeuronParams& neuron);

}  // namespace ahnn
