#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ahnn/devices.hpp"

namespace ahnn {

// Dense row-major matrix of algorithmic weights. Row index is the input
// (bias row last), column index is the output node.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> values() const noexcept { return data_; }

  bool operator==(const WeightMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct CrossbarConfig {
  std::size_t m_inputs = 16;
  std::size_t n_outputs = 3;
  double v_read_max = 0.1;       // V on the drain for x = 1
  double read_width = 1.0e-9;    // s per forward evaluation
  WeightMap map{};               // g_ref and weight_scale

  // Defaults for a device: symmetric weights in the device's full range.
  static CrossbarConfig for_model(const SynapseModel& model, std::size_t m_inputs = 16,
                                  std::size_t n_outputs = 3);
};

struct ForwardResult {
  std::vector<double> z;
  std::vector<EnergyEvent> read_events;
};

// (m_inputs + 1) x n_outputs synapse grid. The extra row is the bias synapse,
// driven at full read voltage. Single writer, many readers.
class Crossbar {
 public:
  Crossbar(CrossbarConfig config, std::shared_ptr<const SynapseModel> model);

  std::size_t rows() const noexcept { return config_.m_inputs + 1; }
  std::size_t cols() const noexcept { return config_.n_outputs; }
  std::size_t bias_row() const noexcept { return config_.m_inputs; }
  const CrossbarConfig& config() const noexcept { return config_; }
  const SynapseModel& model() const noexcept { return *model_; }
  WeightRange weight_range() const { return model_->weight_range(config_.map); }

  // Component-wise inputs in [0, 1]; throws InputOutOfRange.
  ForwardResult forward(std::span<const double> x) const;
  // Same column currents without energy accounting.
  std::vector<double> preactivations(std::span<const double> x) const;

  // Throws WeightOutOfRange; keeps each synapse's variability factor.
  void set_weights(const WeightMatrix& weights);
  WeightMatrix weights() const;

  ProgramStatus program(std::size_t row, std::size_t col, double delta_weight,
                        std::vector<EnergyEvent>& events);

  // Leakage over an interval without inputs. No-op on nonvolatile devices.
  void elapse_idle(double seconds);

  // Replaces per-device mismatch factors, row-major over rows() x cols().
  void set_variability(std::span<const double> factors);

  const SynapseState& synapse(std::size_t row, std::size_t col) const { return cells_[row * cols() + col]; }
  SynapseState& synapse(std::size_t row, std::size_t col) { return cells_[row * cols() + col]; }
  std::span<const SynapseState> synapses() const noexcept { return cells_; }

 private:
  void check_inputs(std::span<const double> x) const;

  CrossbarConfig config_;
  std::shared_ptr<const SynapseModel> model_;
  std::vector<SynapseState> cells_;
};

void write_weights_csv(std::ostream& out, const WeightMatrix& weights);
WeightMatrix read_weights_csv(std::istream& in);
WeightMatrix load_weights_csv(const std::string& path);

}  // namespace ahnn
