#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "ahnn/config.hpp"
#include "ahnn/experiments.hpp"

using namespace ahnn;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

ExperimentConfig base_config(int epochs) {
  ExperimentConfig c;
  c.iris_path = std::string(AHNN_TEST_DATA_DIR) + "/iris.csv";
  c.train.epochs = epochs;
  c.finalize();
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ahnn_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("train artifacts are written with a provenance line") {
  ExperimentConfig c = base_config(10);
  c.train.trace_epochs = {2, 10};
  c.output_dir = scratch("train").string();
  cmd_train(c);
  for (const char* name : {"accuracy_per_epoch.csv", "energy_cumulative.csv", "node_traces_epoch_2.csv",
                           "node_traces_epoch_10.csv", "final_weights.csv", "run_summary.csv",
                           "dataset_normalized.csv"}) {
    const fs::path p = fs::path(c.output_dir) / name;
    REQUIRE(fs::exists(p));
    CHECK(slurp(p).rfind("# ahnn config_hash=", 0) == 0);
  }
  const std::string acc = slurp(fs::path(c.output_dir) / "accuracy_per_epoch.csv");
  CHECK(acc.find("epoch,train_accuracy,test_accuracy\n") != std::string::npos);
  CHECK(std::count(acc.begin(), acc.end(), '\n') == 12);
  // node traces: header, stamp, 100 samples x 3 nodes
  const std::string nodes = slurp(fs::path(c.output_dir) / "node_traces_epoch_2.csv");
  CHECK(std::count(nodes.begin(), nodes.end(), '\n') == 302);
}

TEST_CASE("final weights csv restores the trained array") {
  ExperimentConfig c = base_config(5);
  c.output_dir = scratch("weights").string();
  const TrainReport r = cmd_train(c);
  const WeightMatrix back = load_weights_csv((fs::path(c.output_dir) / "final_weights.csv").string());
  CHECK(back == r.final_weights);
}

TEST_CASE("noise grid names its cases by family") {
  const std::vector<double> levels{0.1};
  const auto grid = noise_grid(NoiseSpec{}, levels);
  REQUIRE(grid.size() == 4);
  CHECK(grid[0].name == "noiseless");
  CHECK(grid[0].spec.noiseless());
  CHECK(grid[1].spec.input_noise == 0.1);
  CHECK(grid[2].spec.device_variability == 0.1);
  CHECK(grid[3].spec.update_noise == 0.1);
}

TEST_CASE("noiseless sweep column matches a plain training run") {
  const ExperimentConfig c = base_config(6);
  const std::vector<double> levels{0.1};
  const auto grid = noise_grid(c.noise, levels);
  const NoiseSweepResult sweep = noise_sweep(c, grid);
  const TrainedSystem plain = train_system(c);
  REQUIRE(sweep.traces[0].size() == plain.report.epochs.size());
  for (std::size_t i = 0; i < plain.report.epochs.size(); ++i) {
    CHECK(sweep.traces[0][i].train_accuracy == plain.report.epochs[i].train_accuracy);
    CHECK(sweep.traces[0][i].cumulative_write_energy == plain.report.epochs[i].cumulative_write_energy);
  }
  // The noisy cases actually take a different path.
  bool differs = false;
  for (std::size_t k = 1; k < 4; ++k)
    differs = differs || sweep.traces[k].back().cumulative_write_energy != plain.report.epochs.back().cumulative_write_energy;
  CHECK(differs);
}

TEST_CASE("device comparison rows") {
  const ExperimentConfig c = base_config(3);
  const std::vector<Technology> techs{Technology::mosfet, Technology::domain_wall};
  const auto rows = compare_devices(c, techs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].time_per_sample_min == Approx(1e-9));
  CHECK(rows[0].total_time == Approx(300e-9));
  CHECK(rows[1].time_per_sample_max == Approx(3e-9));
  CHECK(rows[1].total_time == Approx(900e-9));
  CHECK(rows[0].reset_energy == 0.0);
}

TEST_CASE("retention: zero idle keeps accuracy, long idle collapses it") {
  const ExperimentConfig c = base_config(30);
  const TrainedSystem sys = train_system(c);
  const std::vector<double> idle{0.0, 1e-3, 1e-1};
  const auto pts = retention(sys.crossbar, sys.data, c, idle);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].test_accuracy == sys.report.final_test_accuracy);
  CHECK(pts[0].train_accuracy == sys.report.final_train_accuracy);
  CHECK(pts[1].mean_gate_overdrive == Approx(pts[0].mean_gate_overdrive * std::exp(-1.0)).epsilon(1e-9));
  CHECK(pts[2].test_accuracy == 0.0);
  CHECK(pts[2].train_accuracy == 0.0);
}

TEST_CASE("retention on a nonvolatile array is flat") {
  ExperimentConfig c = base_config(10);
  c.technology = Technology::domain_wall;
  const TrainedSystem sys = train_system(c);
  const std::vector<double> idle{0.0, 1.0};
  const auto pts = retention(sys.crossbar, sys.data, c, idle);
  CHECK(pts[1].test_accuracy == pts[0].test_accuracy);
  CHECK(std::isnan(pts[0].mean_gate_overdrive));
}
