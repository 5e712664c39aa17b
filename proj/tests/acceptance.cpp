// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ahnn/config.hpp"
#include "ahnn/experiments.hpp"
#include "ahnn/feedback.hpp"
#include "ahnn/learner.hpp"
#include "ahnn/neuron.hpp"

using namespace ahnn;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  fmt::print("[{}] AC{:<2} {}: {}\n", v.pass ? "PASS" : "FAIL", id, title, v.detail);
  std::fflush(stdout);
}

ExperimentConfig defaults() {
  ExperimentConfig c;
  c.iris_path = std::string(AHNN_TEST_DATA_DIR) + "/iris.csv";
  c.finalize();
  return c;
}

int first_epoch(const std::vector<EpochTrace>& t, const std::function<bool(double)>& pred) {
  for (const auto& e : t)
    if (pred(e.train_accuracy)) return e.epoch;
  return -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Max |rise - fall| in conductance for n equal up and down steps from one state.
double staircase_asymmetry(const SynapseModel& model, const WeightMap& map, double start, double step, int n) {
  const SynapseState s0 = model.encode(start, 1.0, map);
  SynapseState up = s0, down = s0;
  std::vector<EnergyEvent> events;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    model.program(up, step, map, {}, events);
    model.program(down, -step, map, {}, events);
    const double rise = (model.decode(up, map) - model.decode(s0, map)) * map.weight_scale;
    const double fall = (model.decode(s0, map) - model.decode(down, map)) * map.weight_scale;
    worst = std::max(worst, std::abs(rise - fall));
  }
  return worst;
}

}  // namespace

int main() {
  const ExperimentConfig base = defaults();
  const Dataset data = load_dataset(base);

  const auto t0 = std::chrono::steady_clock::now();
  const TrainedSystem mosfet = train_system(base, data);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const TrainReport& run = mosfet.report;

  report(1, "iris on-chip accuracy", [&] {
    const double tr = run.final_train_accuracy, te = run.final_test_accuracy;
    const bool ok = tr >= 0.85 && std::abs(tr - te) <= 0.10 + 1e-12 && wall < 60.0;
    return Verdict{ok, fmt::format("train {:.1f}% (>= 85), test {:.1f}% (|gap| {:.1f} <= 10), {:.2f} s (< 60)",
                                   100 * tr, 100 * te, 100 * std::abs(tr - te), wall)};
  });

  report(2, "early plateau", [&] {
    const auto& t = run.epochs;
    const bool flat = t.size() >= 3 && t[0].train_accuracy == 0.0 && t[1].train_accuracy == 0.0 &&
                      t[2].train_accuracy == 0.0;
    const int leave = first_epoch(t, [](double a) { return a > 0.0; });
    const int half = first_epoch(t, [](double a) { return a >= 0.5; });
    const bool ok = flat && half >= 5 && half <= 20 && leave > 0 && half - leave <= 3;
    return Verdict{ok, fmt::format("0% through epoch {}, first >=50% at epoch {} (in [5, 20], within 3 epochs)",
                                   leave - 1, half)};
  });

  report(3, "exact timing ledger", [&] {
    ExperimentConfig dw = base;
    dw.technology = Technology::domain_wall;
    const TrainedSystem sys = train_system(dw, data);
    const auto m = run.ledger.elapsed().count(), d = sys.report.ledger.elapsed().count();
    const bool ok = m == 10'000'000'000LL && d == 30'000'000'000LL;
    return Verdict{ok, fmt::format("mosfet {} fs (10 us = 1e10 fs), domain wall {} fs (3e10 fs)", m, d)};
  });

  report(4, "energy orders", [&] {
    const std::vector<Technology> techs{Technology::mosfet, Technology::domain_wall, Technology::rram};
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : {42ULL, 1ULL, 2ULL}) {
      ExperimentConfig c = base;
      c.seed = seed;
      c.finalize();
      const auto rows = compare_devices(c, techs);
      const double em = rows[0].update_energy(), ed = rows[1].update_energy(), er = rows[2].update_energy();
      const bool band = em >= 5e-15 && em <= 500e-15 && ed >= 1e-15 && ed <= 100e-15 && er >= 0.1e-6;
      const bool order = er >= 100.0 * em && em >= ed;
      ok = ok && band && order;
      detail += fmt::format("{}seed {}: mosfet {:.1f} fJ, dw {:.2f} fJ, rram {:.3f} uJ", detail.empty() ? "" : "; ",
                            seed, em * 1e15, ed * 1e15, er * 1e6);
    }
    return Verdict{ok, detail};
  });

  report(5, "gradient fidelity", [&] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> yd(-0.999, 0.999), xd(0.0, 1.0), lam(0.5, 4.0);
    std::bernoulli_distribution sign(0.5);
    const double eta = 0.02;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const NeuronParams p{lam(rng), 0.0};
      const double Y = sign(rng) ? 1.0 : -1.0, y = yd(rng), x = xd(rng);
      // Preactivation giving output y, then perturb the weight of input x.
      const double z = std::atanh(y) * 2.0 / p.lambda;
      const double h = 1e-6;
      auto err = [&](double dw) {
        const double out = activate(z + dw * x, p);
        return 0.5 * (Y - out) * (Y - out);
      };
      const double fd = -eta * (err(h) - err(-h)) / (2 * h);
      const double an = delta_w(Y, y, x, eta, p.lambda);
      const double scale = std::max(std::abs(fd), 1e-3 * eta);
      worst = std::max(worst, std::abs(an - fd) / scale);
    }
    return Verdict{worst <= 1e-5, fmt::format("max relative error {:.2e} over 1000 draws (<= 1e-5)", worst)};
  });

  report(6, "oracle equivalence", [&] {
    ExperimentConfig c = base;
    c.technology = Technology::ideal;
    c.train.epochs = 3;
    c.finalize();
    auto model = make_model(c);
    Crossbar xbar(make_crossbar_config(c, *model), model);
    initialize_weights(xbar, c.train);

    // Plain float SGD on the same sample order.
    const std::size_t m = 16, n = 3;
    std::vector<double> w(17 * 3, c.train.init_weight);
    std::size_t cursor = 0;
    double worst = 0.0;
    std::size_t steps = 0;
    auto observer = [&](int, std::size_t, const Crossbar& hw) {
      const Sample& s = data.train[cursor];
      cursor = (cursor + 1) % data.train.size();
      for (std::size_t o = 0; o < n; ++o) {
        double z = w[m * n + o];
        for (std::size_t i = 0; i < m; ++i) z += w[i * n + o] * s.x[i];
        const double y = activate(z, c.neuron);
        for (std::size_t i = 0; i <= m; ++i) {
          const double x = i == m ? 1.0 : s.x[i];
          w[i * n + o] += delta_w(s.target[o], y, x, c.train.eta, c.neuron.lambda);
        }
      }
      const WeightMatrix got = hw.weights();
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        num = std::max(num, std::abs(got.values()[k] - w[k]));
        den = std::max(den, std::abs(w[k]));
      }
      worst = std::max(worst, num / den);
      ++steps;
    };
    NoiseSource noise(c.noise);
    RunLedger ledger;
    run_training(xbar, data, c.neuron, c.train, noise, ledger, observer);
    const bool ok = steps == 300 && worst <= 1e-9;
    return Verdict{ok, fmt::format("max relative deviation {:.2e} over {} steps (<= 1e-9)", worst, steps)};
  });

  report(7, "staircase symmetry", [&] {
    ExperimentConfig c = base;
    c.mosfet.tau_retention = std::numeric_limits<double>::infinity();
    const auto mos = make_model(c, Technology::mosfet);
    const auto rram = make_model(c, Technology::rram);
    const WeightMap mm = mos->default_weight_map(), rm = rram->default_weight_map();

    // Full-pulse trains from the floor and from the ceiling of the gate window.
    const MosfetSynapseParams& p = c.mosfet;
    SynapseState up{MosfetState{p.v_gs_min}, 1.0}, down{MosfetState{p.v_gs_max}, 1.0};
    const double g_lo = mosfet_conductance(up, p), g_hi = mosfet_conductance(down, p);
    double mirror = 0.0;
    for (int k = 0; k < 7; ++k) {
      up = mosfet_apply_pulse(up, p.i_pulse_max, p.pulse_width, p).state;
      down = mosfet_apply_pulse(down, -p.i_pulse_max, p.pulse_width, p).state;
      mirror = std::max(mirror, std::abs((mosfet_conductance(up, p) - g_lo) - (g_hi - mosfet_conductance(down, p))));
    }
    const double mos_mid = staircase_asymmetry(*mos, mm, 0.3, 0.05, 5);
    const double rram_step = c.rram.delta_g_per_pulse_at_gmin / rm.weight_scale;
    const double rram_mid = staircase_asymmetry(*rram, rm, 0.3, 5 * rram_step, 5);
    const bool ok = mirror < 1e-12 && mos_mid < 1e-12 && rram_mid >= 1e-12;
    return Verdict{ok, fmt::format("mosfet floor/ceiling {:.1e} S, mosfet around w=0.3 {:.1e} S (< 1e-12); "
                                   "rram around w=0.3 {:.2e} S (asymmetric, >= 1e-12)",
                                   mirror, mos_mid, rram_mid)};
  });

  report(8, "noise robustness", [&] {
    const std::vector<double> levels{0.10};
    const auto grid = noise_grid(base.noise, levels);
    const NoiseSweepResult sweep = noise_sweep(base, grid);
    const double clean = sweep.traces[0].back().train_accuracy;
    bool ok = true;
    std::string detail = fmt::format("noiseless {:.1f}%", 100 * clean);
    for (std::size_t k = 1; k < sweep.cases.size(); ++k) {
      const double a = sweep.traces[k].back().train_accuracy;
      ok = ok && std::abs(a - clean) <= 0.05 + 1e-12;
      detail += fmt::format(", {} {:.1f}%", sweep.cases[k].name, 100 * a);
    }
    return Verdict{ok, detail + " (each within 5 points)"};
  });

  report(9, "retention", [&] {
    const double tau = base.mosfet.tau_retention;
    const std::vector<double> idle{0.0, tau, 100 * tau};
    const auto pts = retention(mosfet.crossbar, mosfet.data, base, idle);
    const double ratio = pts[1].mean_gate_overdrive / pts[0].mean_gate_overdrive;
    const double rel = std::abs(ratio / std::exp(-1.0) - 1.0);
    const double chance = 1.0 / 3.0;
    const bool ok = rel <= 1e-6 && pts[2].train_accuracy <= chance && pts[2].test_accuracy <= chance;
    return Verdict{ok, fmt::format("overdrive ratio after tau {:.9f} (1/e, rel err {:.1e}); after 100 tau "
                                   "train {:.1f}% test {:.1f}% (<= chance)",
                                   ratio, rel, 100 * pts[2].train_accuracy, 100 * pts[2].test_accuracy)};
  });

  report(10, "determinism", [&] {
    const fs::path root = fs::temp_directory_path() / "ahnn_acceptance";
    fs::remove_all(root);
    ExperimentConfig a = base, b = base;
    a.output_dir = (root / "a").string();
    b.output_dir = (root / "b").string();
    cmd_train(a);
    cmd_train(b);
    std::size_t files = 0, same = 0;
    for (const auto& entry : fs::directory_iterator(a.output_dir)) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      if (slurp(entry.path()) == slurp(fs::path(b.output_dir) / entry.path().filename())) ++same;
    }
    return Verdict{files > 0 && same == files, fmt::format("{} of {} CSV artifacts byte-identical", same, files)};
  });

  fmt::print("{} of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
