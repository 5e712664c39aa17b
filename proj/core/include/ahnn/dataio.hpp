#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ahnn {

enum class IrisClass { A = 0, B = 1, C = 2 };  // setosa, versicolor, virginica

inline constexpr std::size_t kIrisFeatures = 4;
inline constexpr std::size_t kSensorsPerFeature = 4;
inline constexpr std::size_t kIrisClasses = 3;

struct RawIrisRecord {
  std::array<double, kIrisFeatures> features{};  // cm
  IrisClass label = IrisClass::A;
};

struct Sample {
  std::vector<double> x;       // sensor outputs in [0, 1]
  std::vector<double> target;  // one +1, the rest -1
  IrisClass label = IrisClass::A;
};

struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// Accepts A/B/C, species names and the "Iris-" prefixed UCI spelling.
IrisClass parse_label(std::string_view label);
std::string_view label_name(IrisClass label);

std::vector<RawIrisRecord> read_iris(std::istream& in);
std::vector<RawIrisRecord> load_iris(const std::string& path);

// Per-feature min-max scaling fitted on one split.
class FeatureScaler {
 public:
  static FeatureScaler fit(std::span<const RawIrisRecord> train);

  std::array<double, kIrisFeatures> apply(const RawIrisRecord& record) const;
  const std::array<double, kIrisFeatures>& minimum() const noexcept { return min_; }
  const std::array<double, kIrisFeatures>& maximum() const noexcept { return max_; }

 private:
  std::array<double, kIrisFeatures> min_{};
  std::array<double, kIrisFeatures> max_{};
};

// Four sensor responses per feature, feature-major:
// x, 1 - x, 1 - 2|x - 0.5|, 2|x - 0.5|.
std::vector<double> sensor_expand(std::span<const double> x);

std::vector<double> encode_targets(IrisClass label);
IrisClass decode_targets(std::span<const double> target);

struct SplitRecords {
  std::vector<RawIrisRecord> train;
  std::vector<RawIrisRecord> test;
};

// Stratified, seeded split. Train order is shuffled once and then fixed.
SplitRecords split(std::span<const RawIrisRecord> records, std::uint64_t seed, std::size_t train_size = 100);

// Full pipeline: split, fit scaling on train, expand and encode.
Dataset prepare_iris(std::span<const RawIrisRecord> records, std::uint64_t seed, std::size_t train_size = 100);

// Audit dump of the prepared samples: split, index, label, x..., Y...
void write_dataset_csv(std::ostream& out, const Dataset& data);

}  // namespace ahnn
