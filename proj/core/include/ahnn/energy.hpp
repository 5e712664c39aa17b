#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "ahnn/units.hpp"

namespace ahnn {

enum class EnergyKind { write, reset, read };

struct DeviceIndex {
  std::size_t row = 0;
  std::size_t col = 0;
};

struct EnergyEvent {
  EnergyKind kind = EnergyKind::write;
  double energy = 0.0;  // joules
  Femtoseconds duration{0};
  DeviceIndex device{};
};

// Compensated (Neumaier) accumulator; sums of many femtojoule events stay
// independent of ordering to well below 1e-12 relative.
class EnergyAccumulator {
 public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Cumulative per-kind energy, event counts and elapsed simulated time.
class RunLedger {
 public:
  void record(const EnergyEvent& event);
  void record(std::span<const EnergyEvent> events);
  void advance(Femtoseconds duration);

  double write_energy() const noexcept { return write_.value(); }
  double reset_energy() const noexcept { return reset_.value(); }
  double read_energy() const noexcept { return read_.value(); }
  // Energy spent changing synaptic state (writes plus resets).
  double update_energy() const noexcept { return write_.value() + reset_.value(); }

  std::uint64_t count(EnergyKind kind) const noexcept;
  Femtoseconds elapsed() const noexcept { return elapsed_; }
  std::uint64_t steps() const noexcept { return steps_; }
  Femtoseconds min_step() const noexcept { return min_step_; }
  Femtoseconds max_step() const noexcept { return max_step_; }

 private:
  EnergyAccumulator write_;
  EnergyAccumulator reset_;
  EnergyAccumulator read_;
  std::uint64_t counts_[3] = {0, 0, 0};
  Femtoseconds elapsed_{0};
  Femtoseconds min_step_{0};
  Femtoseconds max_step_{0};
  std::uint64_t steps_ = 0;
};

}  // namespace ahnn
