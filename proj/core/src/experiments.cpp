#include "ahnn/experiments.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <limits>

#include <fmt/format.h>

#include "ahnn/csv.hpp"
#include "ahnn/errors.hpp"

namespace ahnn {

namespace {

ArtifactStamp stamp_for(const ExperimentConfig& config) { return {config_hash(config), config.seed}; }

Crossbar build_crossbar(const ExperimentConfig& config) {
  auto model = make_model(config);
  Crossbar xbar(make_crossbar_config(config, *model), model);
  if (config.noise.device_variability > 0.0) {
    xbar.set_variability(draw_device_factors(config.noise, xbar.rows(), xbar.cols()));
  }
  initialize_weights(xbar, config.train);
  return xbar;
}

}  // namespace

Dataset load_dataset(const ExperimentConfig& config) {
  const auto records = load_iris(config.iris_path);
  return prepare_iris(records, config.seed, config.train_size);
}

TrainedSystem train_system(const ExperimentConfig& config) { return train_system(config, load_dataset(config)); }

TrainedSystem train_system(const ExperimentConfig& input, const Dataset& data) {
  ExperimentConfig config = input;
  config.finalize();
  Crossbar xbar = build_crossbar(config);
  // Per-read variability redraws from a fresh device substream.
  NoiseSource noise(config.noise);
  TrainReport report;
  report.config = config;
  report.epochs = run_training(xbar, data, config.neuron, config.train, noise, report.ledger);
  report.final_weights = xbar.weights();
  report.final_train_accuracy = evaluate(xbar, data.train, config.neuron, config.train.success_band);
  report.final_test_accuracy = evaluate(xbar, data.test, config.neuron, config.train.success_band);
  return {std::move(xbar), data, std::move(report)};
}

void write_train_artifacts(const TrainedSystem& system, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const TrainReport& report = system.report;
  const ArtifactStamp stamp = stamp_for(report.config);

  {
    CsvWriter csv(dir / "accuracy_per_epoch.csv", stamp, {"epoch", "train_accuracy", "test_accuracy"});
    for (const auto& e : report.epochs) {
      csv.cell(e.epoch).cell(e.train_accuracy).cell(e.test_accuracy);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(dir / "energy_cumulative.csv", stamp,
                  {"epoch", "write_energy_j", "reset_energy_j", "read_energy_j", "cumulative_time_s",
                   "clamp_warnings", "resets"});
    for (const auto& e : report.epochs) {
      csv.cell(e.epoch)
          .cell(e.cumulative_write_energy)
          .cell(e.cumulative_reset_energy)
          .cell(e.cumulative_read_energy)
          .cell(to_seconds(e.cumulative_time))
          .cell(e.clamp_warnings)
          .cell(e.resets);
      csv.end_row();
    }
  }
  for (const auto& e : report.epochs) {
    if (e.node_records.empty()) continue;
    CsvWriter csv(dir / fmt::format("node_traces_epoch_{}.csv", e.epoch), stamp, {"epoch", "sample", "node", "y", "Y"});
    for (const auto& r : e.node_records) {
      csv.cell(r.epoch).cell(static_cast<std::uint64_t>(r.sample)).cell(static_cast<std::uint64_t>(r.node));
      csv.cell(r.y).cell(r.target);
      csv.end_row();
    }
  }
  {
    std::ofstream out(dir / "final_weights.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir / "final_weights.csv").string());
    out << stamp.comment() << '\n';
    write_weights_csv(out, report.final_weights);
  }
  {
    std::ofstream out(dir / "dataset_normalized.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir / "dataset_normalized.csv").string());
    out << stamp.comment() << '\n';
    write_dataset_csv(out, system.data);
  }
  {
    const RunLedger& l = report.ledger;
    CsvWriter csv(dir / "run_summary.csv", stamp, {"key", "value"});
    auto kv = [&](std::string_view k, auto v) {
      csv.cell(k).cell(v);
      csv.end_row();
    };
    kv("technology", to_string(report.config.technology));
    kv("epochs", report.config.train.epochs);
    kv("train_samples", static_cast<std::uint64_t>(system.data.train.size()));
    kv("test_samples", static_cast<std::uint64_t>(system.data.test.size()));
    kv("final_train_accuracy", report.final_train_accuracy);
    kv("final_test_accuracy", report.final_test_accuracy);
    kv("cumulative_time_s", to_seconds(l.elapsed()));
    kv("time_per_sample_min_s", to_seconds(l.min_step()));
    kv("time_per_sample_max_s", to_seconds(l.max_step()));
    kv("total_write_energy_j", l.write_energy());
    kv("total_reset_energy_j", l.reset_energy());
    kv("total_update_energy_j", l.update_energy());
    kv("total_read_energy_j", l.read_energy());
    kv("write_events", l.count(EnergyKind::write));
    kv("reset_events", l.count(EnergyKind::reset));
    kv("clamp_warnings", report.epochs.empty() ? std::uint64_t{0} : report.epochs.back().clamp_warnings);
  }
}

TrainReport cmd_train(const ExperimentConfig& config) {
  TrainedSystem system = train_system(config);
  write_train_artifacts(system, config.output_dir);
  return std::move(system.report);
}

std::vector<DeviceComparisonRow> compare_devices(const ExperimentConfig& base,
                                                 std::span<const Technology> technologies) {
  const Dataset data = load_dataset(base);
  std::vector<std::future<DeviceComparisonRow>> jobs;
  for (Technology tech : technologies) {
    jobs.push_back(std::async(std::launch::async, [&base, &data, tech] {
      ExperimentConfig config = base;
      config.technology = tech;
      const TrainedSystem system = train_system(config, data);
      const RunLedger& l = system.report.ledger;
      DeviceComparisonRow row;
      row.technology = tech;
      row.time_per_sample_min = to_seconds(l.min_step());
      row.time_per_sample_max = to_seconds(l.max_step());
      row.total_time = to_seconds(l.elapsed());
      row.write_energy = l.write_energy();
      row.reset_energy = l.reset_energy();
      row.resets = system.report.epochs.empty() ? 0 : system.report.epochs.back().resets;
      row.train_accuracy = system.report.final_train_accuracy;
      row.test_accuracy = system.report.final_test_accuracy;
      return row;
    }));
  }
  std::vector<DeviceComparisonRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

void write_comparison_csv(const ExperimentConfig& base, std::span<const DeviceComparisonRow> rows,
                          const std::filesystem::path& path) {
  CsvWriter csv(path, stamp_for(base),
                {"technology", "time_per_sample_min_s", "time_per_sample_max_s", "total_time_s", "write_energy_j",
                 "reset_energy_j", "total_update_energy_j", "resets", "train_accuracy", "test_accuracy"});
  for (const auto& r : rows) {
    csv.cell(to_string(r.technology))
        .cell(r.time_per_sample_min)
        .cell(r.time_per_sample_max)
        .cell(r.total_time)
        .cell(r.write_energy)
        .cell(r.reset_energy)
        .cell(r.update_energy())
        .cell(r.resets)
        .cell(r.train_accuracy)
        .cell(r.test_accuracy);
    csv.end_row();
  }
}

std::vector<DeviceComparisonRow> cmd_compare_devices(const ExperimentConfig& base,
                                                     std::span<const Technology> technologies) {
  auto rows = compare_devices(base, technologies);
  std::filesystem::create_directories(base.output_dir);
  write_comparison_csv(base, rows, std::filesystem::path(base.output_dir) / "device_comparison.csv");
  return rows;
}

std::vector<NoiseCase> noise_grid(const NoiseSpec& base, std::span<const double> levels) {
  NoiseSpec clean = base;
  clean.device_variability = clean.input_noise = clean.update_noise = 0.0;
  std::vector<NoiseCase> cases{{"noiseless", clean}};
  for (double level : levels) {
    NoiseCase input{fmt::format("input_noise_{:g}", level), clean};
    input.spec.input_noise = level;
    NoiseCase device{fmt::format("device_variability_{:g}", level), clean};
    device.spec.device_variability = level;
    NoiseCase update{fmt::format("update_noise_{:g}", level), clean};
    update.spec.update_noise = level;
    cases.push_back(input);
    cases.push_back(device);
    cases.push_back(update);
  }
  return cases;
}

NoiseSweepResult noise_sweep(const ExperimentConfig& base, std::span<const NoiseCase> cases) {
  const Dataset data = load_dataset(base);
  std::vector<std::future<std::vector<EpochTrace>>> jobs;
  for (const auto& c : cases) {
    jobs.push_back(std::async(std::launch::async, [&base, &data, spec = c.spec] {
      ExperimentConfig config = base;
      config.noise = spec;
      return train_system(config, data).report.epochs;
    }));
  }
  NoiseSweepResult result;
  result.cases.assign(cases.begin(), cases.end());
  for (auto& j : jobs) result.traces.push_back(j.get());
  return result;
}

void write_noise_sweep_csv(const ExperimentConfig& base, const NoiseSweepResult& result,
                           const std::filesystem::path& path) {
  std::vector<std::string> columns{"epoch"};
  for (const auto& c : result.cases) columns.push_back(c.name);
  CsvWriter csv(path, stamp_for(base), columns);
  const std::size_t epochs = result.traces.empty() ? 0 : result.traces.front().size();
  for (std::size_t e = 0; e < epochs; ++e) {
    csv.cell(static_cast<std::uint64_t>(e + 1));
    for (const auto& t : result.traces) csv.cell(t[e].train_accuracy);
    csv.end_row();
  }
}

NoiseSweepResult cmd_noise_sweep(const ExperimentConfig& base, std::span<const double> levels) {
  const auto cases = noise_grid(base.noise, levels);
  NoiseSweepResult result = noise_sweep(base, cases);
  std::filesystem::create_directories(base.output_dir);
  write_noise_sweep_csv(base, result, std::filesystem::path(base.output_dir) / "noise_sweep.csv");
  return result;
}

double mean_gate_overdrive(const Crossbar& xbar) {
  const auto* mosfet = dynamic_cast<const MosfetSynapse*>(&xbar.model());
  if (mosfet == nullptr) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const auto& s : xbar.synapses()) sum += std::get<MosfetState>(s.device).v_gs - mosfet->params().v_gs_min;
  return sum / static_cast<double>(xbar.synapses().size());
}

std::vector<RetentionPoint> retention(const Crossbar& trained, const Dataset& data, const ExperimentConfig& config,
                                      std::span<const double> idle_durations) {
  std::vector<RetentionPoint> points;
  for (double idle : idle_durations) {
    Crossbar xbar = trained;
    xbar.elapse_idle(idle);
    RetentionPoint p;
    p.idle = idle;
    p.train_accuracy = evaluate(xbar, data.train, config.neuron, config.train.success_band);
    p.test_accuracy = evaluate(xbar, data.test, config.neuron, config.train.success_band);
    const WeightMatrix w = xbar.weights();
    double sum = 0.0;
    for (double v : w.values()) sum += std::abs(v);
    p.mean_abs_weight = sum / static_cast<double>(w.values().size());
    p.mean_gate_overdrive = mean_gate_overdrive(xbar);
    points.push_back(p);
  }
  return points;
}

void write_retention_csv(const ExperimentConfig& config, std::span<const RetentionPoint> points,
                         const std::filesystem::path& path) {
  CsvWriter csv(path, stamp_for(config),
                {"idle_s", "train_accuracy", "test_accuracy", "mean_abs_weight", "mean_gate_overdrive_v"});
  for (const auto& p : points) {
    csv.cell(p.idle).cell(p.train_accuracy).cell(p.test_accuracy).cell(p.mean_abs_weight).cell(p.mean_gate_overdrive);
    csv.end_row();
  }
}

std::vector<RetentionPoint> cmd_retention(const ExperimentConfig& input, std::span<const double> idle_durations,
                                          const std::string& weights_csv) {
  ExperimentConfig config = input;
  config.finalize();
  std::vector<RetentionPoint> points;
  if (weights_csv.empty()) {
    const TrainedSystem system = train_system(config);
    points = retention(system.crossbar, system.data, config, idle_durations);
  } else {
    const Dataset data = load_dataset(config);
    auto model = make_model(config);
    // Exported weights are effective values, so they are restored without mismatch.
    Crossbar xbar(make_crossbar_config(config, *model), model);
    xbar.set_weights(load_weights_csv(weights_csv));
    points = retention(xbar, data, config, idle_durations);
  }
  std::filesystem::create_directories(config.output_dir);
  write_retention_csv(config, points, std::filesystem::path(config.output_dir) / "retention.csv");
  return points;
}

std::vector<double> default_idle_durations() { return {0.0, 1e-6, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 1e-1}; }

}  // namespace ahnn
