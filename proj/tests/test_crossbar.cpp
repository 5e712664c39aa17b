#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "ahnn/crossbar.hpp"
#include "ahnn/errors.hpp"

using namespace ahnn;
using doctest::Approx;

namespace {

Crossbar mosfet_array(std::size_t m = 16, std::size_t n = 3) {
  auto model = std::make_shared<MosfetSynapse>();
  return Crossbar(CrossbarConfig::for_model(*model, m, n), model);
}

WeightMatrix random_weights(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double span = 1.0) {
  std::uniform_real_distribution<double> d(-span, span);
  WeightMatrix w(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) w(r, c) = d(rng);
  return w;
}

std::vector<double> random_input(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> x(m);
  for (auto& v : x) v = d(rng);
  return x;
}

// Ideal-float oracle: z = W^T x + b with the bias in the last row.
std::vector<double> oracle(const WeightMatrix& w, const std::vector<double>& x) {
  std::vector<double> z(w.cols(), 0.0);
  for (std::size_t c = 0; c < w.cols(); ++c) {
    for (std::size_t r = 0; r < x.size(); ++r) z[c] += w(r, c) * x[r];
    z[c] += w(x.size(), c);
  }
  return z;
}

}  // namespace

TEST_CASE("zero weights give zero preactivation") {
  Crossbar xbar = mosfet_array();
  xbar.set_weights(WeightMatrix(17, 3, 0.0));
  for (const auto& s : xbar.synapses()) CHECK(xbar.model().read_conductance(s) == Approx(3.5e-3).epsilon(1e-12));
  std::mt19937_64 rng(1);
  const auto z = xbar.forward(random_input(16, rng)).z;
  for (double v : z) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("zero input leaves only the bias") {
  Crossbar xbar = mosfet_array();
  std::mt19937_64 rng(2);
  const WeightMatrix w = random_weights(17, 3, rng);
  xbar.set_weights(w);
  const auto z = xbar.forward(std::vector<double>(16, 0.0)).z;
  for (std::size_t c = 0; c < 3; ++c) CHECK(z[c] == Approx(w(16, c)).epsilon(1e-9));
}

TEST_CASE("two-input single-output example") {
  Crossbar xbar = mosfet_array(2, 1);
  WeightMatrix w(3, 1);
  w(0, 0) = 0.5;
  w(1, 0) = -0.25;
  w(2, 0) = 0.1;
  xbar.set_weights(w);
  const auto z = xbar.forward(std::vector<double>{1.0, 0.8}).z;
  CHECK(z[0] == Approx(0.4).epsilon(1e-12));
}

TEST_CASE("forward matches the float oracle") {
  Crossbar xbar = mosfet_array();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const WeightMatrix w = random_weights(17, 3, rng);
    xbar.set_weights(w);
    const auto x = random_input(16, rng);
    const auto z = xbar.forward(x).z;
    const auto ref = oracle(w, x);
    for (std::size_t c = 0; c < 3; ++c) CHECK(z[c] == Approx(ref[c]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("forward is linear in the inputs") {
  Crossbar xbar = mosfet_array();
  std::mt19937_64 rng(4);
  xbar.set_weights(random_weights(17, 3, rng));
  const std::vector<double> zero(16, 0.0);
  const auto z0 = xbar.forward(zero).z;
  for (int k = 0; k < 200; ++k) {
    const auto x1 = random_input(16, rng), x2 = random_input(16, rng);
    const double a = 0.3, b = 0.6;
    std::vector<double> mix(16);
    for (std::size_t i = 0; i < 16; ++i) mix[i] = a * x1[i] + b * x2[i];
    const auto z1 = xbar.forward(x1).z, z2 = xbar.forward(x2).z, zm = xbar.forward(mix).z;
    for (std::size_t c = 0; c < 3; ++c) {
      // The bias row is affine, so compare the linear parts.
      const double expect = a * (z1[c] - z0[c]) + b * (z2[c] - z0[c]);
      CHECK(zm[c] - z0[c] == Approx(expect).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("swapping an input and its weight row leaves z unchanged") {
  Crossbar xbar = mosfet_array();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, 15);
  for (int k = 0; k < 100; ++k) {
    WeightMatrix w = random_weights(17, 3, rng);
    auto x = random_input(16, rng);
    xbar.set_weights(w);
    const auto before = xbar.forward(x).z;
    const std::size_t i = pick(rng), j = pick(rng);
    std::swap(x[i], x[j]);
    for (std::size_t c = 0; c < 3; ++c) std::swap(w(i, c), w(j, c));
    xbar.set_weights(w);
    const auto after = xbar.forward(x).z;
    for (std::size_t c = 0; c < 3; ++c) CHECK(after[c] == Approx(before[c]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("read energy scales with the square of the read voltage") {
  auto model = std::make_shared<MosfetSynapse>();
  CrossbarConfig full = CrossbarConfig::for_model(*model);
  CrossbarConfig half = full;
  half.v_read_max = 0.05;
  Crossbar a(full, model), b(half, model);
  std::mt19937_64 rng(6);
  const WeightMatrix w = random_weights(17, 3, rng);
  a.set_weights(w);
  b.set_weights(w);
  const auto x = random_input(16, rng);
  double ea = 0.0, eb = 0.0;
  for (const auto& e : a.forward(x).read_events) ea += e.energy;
  for (const auto& e : b.forward(x).read_events) eb += e.energy;
  CHECK(ea == Approx(4.0 * eb).epsilon(1e-12));
  CHECK(a.forward(x).read_events.size() == 17 * 3);
}

TEST_CASE("set and get weights round-trip") {
  Crossbar xbar = mosfet_array();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const WeightMatrix w = random_weights(17, 3, rng);
    xbar.set_weights(w);
    const WeightMatrix back = xbar.weights();
    for (std::size_t r = 0; r < 17; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(back(r, c) == Approx(w(r, c)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("full-scale weights sit at the top of the gate window") {
  Crossbar xbar = mosfet_array();
  xbar.set_weights(WeightMatrix(17, 3, 1.0));
  for (const auto& s : xbar.synapses()) CHECK(std::get<MosfetState>(s.device).v_gs == Approx(1.6).epsilon(1e-12));
  CHECK_THROWS_AS(xbar.set_weights(WeightMatrix(17, 3, 1.2)), WeightOutOfRange);
  CHECK_THROWS_AS(xbar.set_weights(WeightMatrix(16, 3, 0.0)), WeightOutOfRange);
}

TEST_CASE("inputs outside [0, 1] are rejected") {
  Crossbar xbar = mosfet_array();
  std::vector<double> x(16, 0.5);
  x[3] = 1.1;
  CHECK_THROWS_AS(xbar.forward(x), InputOutOfRange);
  x[3] = 1.0 + 1e-10;
  CHECK_NOTHROW(xbar.forward(x));
  CHECK_THROWS_AS(xbar.forward(std::vector<double>(15, 0.5)), InputOutOfRange);
}

TEST_CASE("idle decay shrinks gate overdrive by 1/e after tau") {
  Crossbar xbar = mosfet_array();
  std::mt19937_64 rng(8);
  xbar.set_weights(random_weights(17, 3, rng));
  const auto before = std::vector<SynapseState>(xbar.synapses().begin(), xbar.synapses().end());
  xbar.elapse_idle(0.0);
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(std::get<MosfetState>(xbar.synapses()[i].device).v_gs == std::get<MosfetState>(before[i].device).v_gs);
  xbar.elapse_idle(1e-3);
  for (std::size_t i = 0; i < before.size(); ++i) {
    const double v0 = std::get<MosfetState>(before[i].device).v_gs - 0.6;
    const double v1 = std::get<MosfetState>(xbar.synapses()[i].device).v_gs - 0.6;
    CHECK(v1 == Approx(v0 * std::exp(-1.0)).epsilon(1e-12));
  }
}

TEST_CASE("domain wall array ignores idle time") {
  auto model = std::make_shared<DomainWallSynapse>();
  Crossbar xbar(CrossbarConfig::for_model(*model), model);
  std::mt19937_64 rng(9);
  const WeightMatrix w = random_weights(17, 3, rng);
  xbar.set_weights(w);
  const WeightMatrix before = xbar.weights();
  xbar.elapse_idle(1.0);
  CHECK(xbar.weights() == before);
}

TEST_CASE("variability scales conductance per device") {
  Crossbar xbar = mosfet_array(2, 1);
  xbar.set_weights(WeightMatrix(3, 1, 0.0));
  xbar.set_variability(std::vector<double>{1.1, 1.0, 1.0});
  const auto z = xbar.forward(std::vector<double>{1.0, 0.0}).z;
  // 10% of g_ref = 0.35 mS over weight_scale 2.5 mS.
  CHECK(z[0] == Approx(0.14).epsilon(1e-12));
  CHECK_THROWS_AS(xbar.set_variability(std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("weights csv round trip") {
  std::mt19937_64 rng(10);
  const WeightMatrix w = random_weights(17, 3, rng);
  std::stringstream s;
  write_weights_csv(s, w);
  const std::string text = s.str();
  CHECK(text.rfind("input,out_0,out_1,out_2\n", 0) == 0);
  CHECK(text.find("\nbias,") != std::string::npos);
  std::stringstream with_comment("# provenance\n" + text);
  CHECK(read_weights_csv(with_comment) == w);

  std::stringstream bad("input,out_0\n0,abc\n");
  CHECK_THROWS_AS(read_weights_csv(bad), ParseError);
  CHECK_THROWS_AS(load_weights_csv("/nonexistent/weights.csv"), MissingFile);
}
