#include "ahnn/crossbar.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "ahnn/errors.hpp"

namespace ahnn {

namespace {
constexpr double kInputTolerance = 1e-9;
}

CrossbarConfig CrossbarConfig::for_model(const SynapseModel& model, std::size_t m_inputs,
                                         std::size_t n_outputs) {
  CrossbarConfig config;
  config.m_inputs = m_inputs;
  config.n_outputs = n_outputs;
  config.map = model.default_weight_map();
  return config;
}

Crossbar::Crossbar(CrossbarConfig config, std::shared_ptr<const SynapseModel> model)
    : config_(config), model_(std::move(model)) {
  if (!model_) throw ConfigError("crossbar requires a device model");
  if (config_.m_inputs == 0 || config_.n_outputs == 0) throw ConfigError("crossbar dimensions must be nonzero");
  if (!(config_.v_read_max > 0.0) || config_.v_read_max > 0.1 + 1e-12) {
    throw ConfigError("crossbar.v_read_max must lie in (0, 0.1] V to stay in the linear drain regime");
  }
  if (!(config_.read_width > 0.0)) throw ConfigError("crossbar.read_width must be positive");
  if (!(config_.map.weight_scale > 0.0)) throw ConfigError("crossbar weight_scale must be positive");
  cells_.assign(rows() * cols(), model_->encode(0.0, 1.0, config_.map));
}

void Crossbar::check_inputs(std::span<const double> x) const {
  if (x.size() != config_.m_inputs) {
    throw InputOutOfRange(fmt::format("expected {} inputs, got {}", config_.m_inputs, x.size()));
  }
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (!(x[m] >= -kInputTolerance && x[m] <= 1.0 + kInputTolerance)) {
      throw InputOutOfRange(fmt::format("input {} = {} outside [0, 1]", m, x[m]));
    }
  }
}

ForwardResult Crossbar::forward(std::span<const double> x) const {
  check_inputs(x);
  ForwardResult result;
  result.z.assign(cols(), 0.0);
  result.read_events.reserve(rows() * cols());
  const double scale = config_.map.weight_scale * config_.v_read_max;
  for (std::size_t n = 0; n < cols(); ++n) {
    double current = 0.0;
    for (std::size_t r = 0; r < rows(); ++r) {
      const double v = (r == bias_row() ? 1.0 : x[r]) * config_.v_read_max;
      const SynapseState& s = synapse(r, n);
      current += model_->column_current(s, v, config_.map);
      EnergyEvent e = synapse_read_energy(model_->read_conductance(s), v, config_.read_width);
      e.device = {r, n};
      result.read_events.push_back(e);
    }
    result.z[n] = current / scale;
  }
  return result;
}

std::vector<double> Crossbar::preactivations(std::span<const double> x) const {
  check_inputs(x);
  std::vector<double> z(cols(), 0.0);
  const double scale = config_.map.weight_scale * config_.v_read_max;
  for (std::size_t n = 0; n < cols(); ++n) {
    double current = 0.0;
    for (std::size_t r = 0; r < rows(); ++r) {
      const double v = (r == bias_row() ? 1.0 : x[r]) * config_.v_read_max;
      current += model_->column_current(synapse(r, n), v, config_.map);
    }
    z[n] = current / scale;
  }
  return z;
}

void Crossbar::set_weights(const WeightMatrix& weights) {
  if (weights.rows() != rows() || weights.cols() != cols()) {
    throw WeightOutOfRange(fmt::format("weight matrix is {}x{}, crossbar is {}x{}", weights.rows(),
                                       weights.cols(), rows(), cols()));
  }
  std::vector<SynapseState> next;
  next.reserve(cells_.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols(); ++c) {
      next.push_back(model_->encode(weights(r, c), synapse(r, c).variability_factor, config_.map));
    }
  }
  cells_ = std::move(next);
}

WeightMatrix Crossbar::weights() const {
  WeightMatrix w(rows(), cols());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols(); ++c) w(r, c) = model_->decode(synapse(r, c), config_.map);
  }
  return w;
}

ProgramStatus Crossbar::program(std::size_t row, std::size_t col, double delta_weight,
                                std::vector<EnergyEvent>& events) {
  return model_->program(synapse(row, col), delta_weight, config_.map, {row, col}, events);
}

void Crossbar::elapse_idle(double seconds) {
  if (seconds < 0.0) throw ConfigError("idle duration must be >= 0");
  if (seconds == 0.0 || !model_->is_volatile()) return;
  for (auto& s : cells_) model_->decay(s, seconds);
}

void Crossbar::set_variability(std::span<const double> factors) {
  if (factors.size() != cells_.size()) {
    throw ConfigError(fmt::format("expected {} variability factors, got {}", cells_.size(), factors.size()));
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].variability_factor = factors[i];
}

void write_weights_csv(std::ostream& out, const WeightMatrix& weights) {
  out << "input";
  for (std::size_t c = 0; c < weights.cols(); ++c) out << ",out_" << c;
  out << '\n';
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    if (r + 1 == weights.rows()) {
      out << "bias";
    } else {
      out << r;
    }
    for (std::size_t c = 0; c < weights.cols(); ++c) out << ',' << fmt::format("{:.17g}", weights(r, c));
    out << '\n';
  }
}

WeightMatrix read_weights_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // row label
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(line_no, "non-numeric weight '" + cell + "'");
      }
    }
    if (!rows.empty() && values.size() != rows.front().size()) throw ParseError(line_no, "ragged weight row");
    if (values.empty()) throw ParseError(line_no, "weight row has no values");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(line_no, "no weight rows");
  WeightMatrix w(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) w(r, c) = rows[r][c];
  }
  return w;
}

WeightMatrix load_weights_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  return read_weights_csv(in);
}

}  // namespace ahnn
