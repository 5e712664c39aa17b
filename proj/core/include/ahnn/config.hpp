#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ahnn/crossbar.hpp"
#include "ahnn/devices.hpp"
#include "ahnn/learner.hpp"
#include "ahnn/neuron.hpp"
#include "ahnn/perturb.hpp"

namespace ahnn {

std::string default_iris_path();

struct ExperimentConfig {
  Technology technology = Technology::mosfet;
  MosfetSynapseParams mosfet;
  DomainWallParams domain_wall;
  RramParams rram;
  IdealSynapseParams ideal;
  double v_read_max = 0.1;
  double read_width = 1.0e-9;
  NeuronParams neuron;
  TrainConfig train;
  NoiseSpec noise;
  std::uint64_t seed = 42;  // feeds the data split, initialization and all noise substreams
  std::size_t train_size = 100;
  std::string iris_path = default_iris_path();
  std::string output_dir = "ahnn_out";

  // Propagates the run seed and validates every parameter block.
  void finalize();
};

// Sectioned key-value text:
//   # comment
//   [train]
//   eta = 0.02
// Keys may also be written fully dotted outside any section.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Applies one "section.key=value" override.
void apply_override(ExperimentConfig& config, std::string_view assignment);
void set_value(ExperimentConfig& config, std::string_view key, std::string_view value);
std::string get_value(const ExperimentConfig& config, std::string_view key);
std::vector<std::string> config_keys();

// Every key except output.dir, sorted, one "key = value" per line.
std::string canonical_form(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

std::shared_ptr<const SynapseModel> make_model(const ExperimentConfig& config);
std::shared_ptr<const SynapseModel> make_model(const ExperimentConfig& config, Technology technology);
CrossbarConfig make_crossbar_config(const ExperimentConfig& config, const SynapseModel& model);

}  // namespace ahnn
