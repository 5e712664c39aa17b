// ahnn-sim: experiment runner for the crossbar on-chip learning simulator.
//
//   ahnn-sim train            [-c cfg] [-o dir] [key=value ...]
//   ahnn-sim compare-devices  [-c cfg] [-o dir] [--devices mosfet,domain_wall,rram] [key=value ...]
//   ahnn-sim noise-sweep      [-c cfg] [-o dir] [--levels 0.1] [key=value ...]
//   ahnn-sim retention        [-c cfg] [-o dir] [--weights final_weights.csv] [--idle 0,1e-3] [key=value ...]
//
// AHNN_CONFIG names a default configuration file. Exit codes: 0 success,
// 1 configuration error, 2 data error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "ahnn/config.hpp"
#include "ahnn/errors.hpp"
#include "ahnn/experiments.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

struct CommonOptions {
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("-c,--config", opts.config_path, "configuration file (default: $AHNN_CONFIG)");
  cmd->add_option("-o,--out", opts.output_dir, "output directory (overrides output.dir)");
  cmd->add_option("overrides", opts.overrides, "key=value overrides, e.g. train.eta=0.05");
}

ahnn::ExperimentConfig resolve_config(const CommonOptions& opts) {
  std::string path = opts.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("AHNN_CONFIG"); env != nullptr && *env != '\0') path = env;
  }
  ahnn::ExperimentConfig config = path.empty() ? ahnn::ExperimentConfig{} : ahnn::load_config(path);
  for (const auto& o : opts.overrides) ahnn::apply_override(config, o);
  if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
  config.finalize();
  return config;
}

void print_train(const ahnn::TrainReport& r) {
  const auto& l = r.ledger;
  fmt::print("technology            {}\n", ahnn::to_string(r.config.technology));
  fmt::print("final train accuracy  {:.2f} %\n", 100.0 * r.final_train_accuracy);
  fmt::print("final test accuracy   {:.2f} %\n", 100.0 * r.final_test_accuracy);
  fmt::print("cumulative time       {:.6g} s\n", ahnn::to_seconds(l.elapsed()));
  fmt::print("synapse update energy {:.6g} J\n", l.update_energy());
  fmt::print("artifacts             {}\n", r.config.output_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral simulator of on-chip SGD learning in analog crossbar arrays"};
  app.require_subcommand(1);

  CommonOptions train_opts, compare_opts, sweep_opts, retention_opts;
  std::vector<std::string> devices{"mosfet", "domain_wall", "rram"};
  std::vector<double> levels{0.10};
  std::vector<double> idle = ahnn::default_idle_durations();
  std::string weights_path;

  auto* train = app.add_subcommand("train", "train on Iris and write per-epoch artifacts");
  add_common(train, train_opts);

  auto* compare = app.add_subcommand("compare-devices", "train every technology and tabulate time and energy");
  add_common(compare, compare_opts);
  compare->add_option("--devices", devices, "technologies to compare")->delimiter(',');

  auto* sweep = app.add_subcommand("noise-sweep", "accuracy vs epoch under each noise family");
  add_common(sweep, sweep_opts);
  sweep->add_option("--levels", levels, "noise fractions to sweep")->delimiter(',');

  auto* retain = app.add_subcommand("retention", "accuracy after idle leakage of a trained array");
  add_common(retain, retention_opts);
  retain->add_option("--weights", weights_path, "trained weights CSV (trains first when omitted)");
  retain->add_option("--idle", idle, "idle durations in seconds")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (train->parsed()) {
      print_train(ahnn::cmd_train(resolve_config(train_opts)));
    } else if (compare->parsed()) {
      const auto config = resolve_config(compare_opts);
      std::vector<ahnn::Technology> techs;
      for (const auto& d : devices) techs.push_back(ahnn::parse_technology(d));
      for (const auto& r : ahnn::cmd_compare_devices(config, techs)) {
        fmt::print("{:<12} sample {:.3g}..{:.3g} s  total {:.6g} s  energy {:.6g} J  train {:.1f} %\n",
                   ahnn::to_string(r.technology), r.time_per_sample_min, r.time_per_sample_max, r.total_time,
                   r.update_energy(), 100.0 * r.train_accuracy);
      }
    } else if (sweep->parsed()) {
      const auto config = resolve_config(sweep_opts);
      const auto result = ahnn::cmd_noise_sweep(config, levels);
      for (std::size_t i = 0; i < result.cases.size(); ++i) {
        const double acc = result.traces[i].empty() ? 0.0 : result.traces[i].back().train_accuracy;
        fmt::print("{:<24} final train {:.1f} %\n", result.cases[i].name, 100.0 * acc);
      }
    } else if (retain->parsed()) {
      const auto config = resolve_config(retention_opts);
      for (const auto& p : ahnn::cmd_retention(config, idle, weights_path)) {
        fmt::print("idle {:<8.3g} s  test {:.1f} %  mean |w| {:.4f}\n", p.idle, 100.0 * p.test_accuracy,
                   p.mean_abs_weight);
      }
    }
  } catch (const ahnn::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ahnn::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
