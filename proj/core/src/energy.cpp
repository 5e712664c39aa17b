#include "ahnn/energy.hpp"

#include <cmath>

namespace ahnn {

void EnergyAccumulator::add(double value) noexcept {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

void RunLedger::record(const EnergyEvent& event) {
  switch (event.kind) {
    case EnergyKind::write:
      write_.add(event.energy);
      break;
    case EnergyKind::reset:
      reset_.add(event.energy);
      break;
    case EnergyKind::read:
      read_.add(event.energy);
      break;
  }
  ++counts_[static_cast<int>(event.kind)];
}

void RunLedger::record(std::span<const EnergyEvent> events) {
  for (const auto& e : events) record(e);
}

void RunLedger::advance(Femtoseconds duration) {
  elapsed_ += duration;
  if (steps_ == 0 || duration < min_step_) min_step_ = duration;
  if (steps_ == 0 || duration > max_step_) max_step_ = duration;
  ++steps_;
}

std::uint64_t RunLedger::count(EnergyKind kind) const noexcept {
  return counts_[static_cast<int>(kind)];
}

}  // namespace ahnn
