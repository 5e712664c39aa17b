#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ahnn/config.hpp"
#include "ahnn/crossbar.hpp"
#include "ahnn/dataio.hpp"
#include "ahnn/energy.hpp"
#include "ahnn/learner.hpp"

namespace ahnn {

struct TrainReport {
  ExperimentConfig config;
  std::vector<EpochTrace> epochs;
  WeightMatrix final_weights;
  double final_train_accuracy = 0.0;
  double final_test_accuracy = 0.0;
  RunLedger ledger;
};

// A trained array together with the data it was trained on.
struct TrainedSystem {
  Crossbar crossbar;
  Dataset data;
  TrainReport report;
};

Dataset load_dataset(const ExperimentConfig& config);

// Builds the array for `config` (device, mismatch draw, initialization) and trains it.
TrainedSystem train_system(const ExperimentConfig& config);
TrainedSystem train_system(const ExperimentConfig& config, const Dataset& data);

// accuracy_per_epoch.csv, energy_cumulative.csv, node_traces_epoch_<E>.csv,
// final_weights.csv, run_summary.csv and dataset_normalized.csv.
void write_train_artifacts(const TrainedSystem& system, const std::filesystem::path& dir);

TrainReport cmd_train(const ExperimentConfig& config);

struct DeviceComparisonRow {
  Technology technology = Technology::mosfet;
  double time_per_sample_min = 0.0;  // s
  double time_per_sample_max = 0.0;  // s
  double total_time = 0.0;           // s
  double write_energy = 0.0;         // J
  double reset_energy = 0.0;         // J
  std::uint64_t resets = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;

  double update_energy() const noexcept { return write_energy + reset_energy; }
};

std::vector<DeviceComparisonRow> compare_devices(const ExperimentConfig& base, std::span<const Technology> technologies);
void write_comparison_csv(const ExperimentConfig& base, std::span<const DeviceComparisonRow> rows,
                          const std::filesystem::path& path);
std::vector<DeviceComparisonRow> cmd_compare_devices(const ExperimentConfig& base,
                                                     std::span<const Technology> technologies);

struct NoiseCase {
  std::string name;
  NoiseSpec spec;
};

// noiseless plus one case per family (input, device variability, update) at each level.
std::vector<NoiseCase> noise_grid(const NoiseSpec& base, std::span<const double> levels);

struct NoiseSweepResult {
  std::vector<NoiseCase> cases;
  std::vector<std::vector<EpochTrace>> traces;  // per case
};

// Cases are independent and run concurrently.
NoiseSweepResult noise_sweep(const ExperimentConfig& base, std::span<const NoiseCase> cases);
void write_noise_sweep_csv(const ExperimentConfig& base, const NoiseSweepResult& result,
                           const std::filesystem::path& path);
NoiseSweepResult cmd_noise_sweep(const ExperimentConfig& base, std::span<const double> levels);

struct RetentionPoint {
  double idle = 0.0;  // s
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double mean_abs_weight = 0.0;
  double mean_gate_overdrive = 0.0;  // V above v_gs_min (MOSFET only, else NaN)
};

double mean_gate_overdrive(const Crossbar& xbar);
std::vector<RetentionPoint> retention(const Crossbar& trained, const Dataset& data, const ExperimentConfig& config,
                                      std::span<const double> idle_durations);
void write_retention_csv(const ExperimentConfig& config, std::span<const RetentionPoint> points,
                         const std::filesystem::path& path);

// Uses `weights_csv` when given, otherwise trains first.
std::vector<RetentionPoint> cmd_retention(const ExperimentConfig& config, std::span<const double> idle_durations,
                                          const std::string& weights_csv = {});

std::vector<double> default_idle_durations();

}  // namespace ahnn
