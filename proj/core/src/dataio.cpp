#include "ahnn/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "ahnn/errors.hpp"

namespace ahnn {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(cell, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == cell.size();
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

IrisClass parse_label(std::string_view label) {
  std::string l = lower(trim(label));
  if (l.rfind("iris-", 0) == 0) l = l.substr(5);
  if (l == "a" || l == "setosa") return IrisClass::A;
  if (l == "b" || l == "versicolor") return IrisClass::B;
  if (l == "c" || l == "virginica") return IrisClass::C;
  throw UnknownLabel(std::string(label));
}

std::string_view label_name(IrisClass label) {
  switch (label) {
    case IrisClass::A:
      return "A";
    case IrisClass::B:
      return "B";
    case IrisClass::C:
      return "C";
  }
  return "?";
}

std::vector<RawIrisRecord> read_iris(std::istream& in) {
  std::vector<RawIrisRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto cells = split_row(line);
    double probe = 0.0;
    if (first_content && !cells.empty() && !parse_number(cells.front(), probe)) {
      first_content = false;  // header row
      continue;
    }
    first_content = false;
    if (cells.size() != kIrisFeatures + 1) {
      throw ParseError(line_no, fmt::format("expected {} columns, found {}", kIrisFeatures + 1, cells.size()));
    }
    RawIrisRecord rec;
    for (std::size_t i = 0; i < kIrisFeatures; ++i) {
      double v = 0.0;
      if (!parse_number(cells[i], v)) throw ParseError(line_no, "non-numeric feature '" + cells[i] + "'");
      if (!std::isfinite(v) || v <= 0.0) throw ParseError(line_no, "feature must be positive and finite");
      rec.features[i] = v;
    }
    try {
      rec.label = parse_label(cells[kIrisFeatures]);
    } catch (const UnknownLabel& e) {
      throw ParseError(line_no, e.what());
    }
    records.push_back(rec);
  }
  if (records.empty()) throw ParseError(line_no, "no data rows");
  return records;
}

std::vector<RawIrisRecord> load_iris(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  return read_iris(in);
}

FeatureScaler FeatureScaler::fit(std::span<const RawIrisRecord> train) {
  if (train.empty()) throw DataError("cannot fit scaling on an empty split");
  FeatureScaler s;
  s.min_ = train.front().features;
  s.max_ = train.front().features;
  for (const auto& r : train) {
    for (std::size_t i = 0; i < kIrisFeatures; ++i) {
      s.min_[i] = std::min(s.min_[i], r.features[i]);
      s.max_[i] = std::max(s.max_[i], r.features[i]);
    }
  }
  for (std::size_t i = 0; i < kIrisFeatures; ++i) {
    if (!(s.max_[i] > s.min_[i])) throw DegenerateFeature(i);
  }
  return s;
}

std::array<double, kIrisFeatures> FeatureScaler::apply(const RawIrisRecord& record) const {
  std::array<double, kIrisFeatures> out{};
  for (std::size_t i = 0; i < kIrisFeatures; ++i) {
    out[i] = std::clamp((record.features[i] - min_[i]) / (max_[i] - min_[i]), 0.0, 1.0);
  }
  return out;
}

std::vector<double> sensor_expand(std::span<const double> x) {
  std::vector<double> out;
  out.reserve(x.size() * kSensorsPerFeature);
  for (double v : x) {
    const double fold = 2.0 * std::abs(v - 0.5);
    out.push_back(v);
    out.push_back(1.0 - v);
    out.push_back(1.0 - fold);
    out.push_back(fold);
  }
  return out;
}

std::vector<double> encode_targets(IrisClass label) {
  std::vector<double> t(kIrisClasses, -1.0);
  t[static_cast<std::size_t>(label)] = 1.0;
  return t;
}

IrisClass decode_targets(std::span<const double> target) {
  const auto it = std::max_element(target.begin(), target.end());
  return static_cast<IrisClass>(std::distance(target.begin(), it));
}

SplitRecords split(std::span<const RawIrisRecord> records, std::uint64_t seed, std::size_t train_size) {
  if (train_size == 0 || train_size >= records.size()) {
    throw DataError(fmt::format("train size {} invalid for {} records", train_size, records.size()));
  }
  std::mt19937_64 rng(seed);
  std::array<std::vector<std::size_t>, kIrisClasses> by_class;
  for (std::size_t i = 0; i < records.size(); ++i) by_class[static_cast<std::size_t>(records[i].label)].push_back(i);

  // Largest-remainder allocation of the train quota across classes.
  std::array<std::size_t, kIrisClasses> quota{};
  std::array<double, kIrisClasses> remainder{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < kIrisClasses; ++c) {
    const double exact = static_cast<double>(train_size) * by_class[c].size() / records.size();
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - quota[c];
    assigned += quota[c];
  }
  while (assigned < train_size) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kIrisClasses; ++c) {
      if (remainder[c] > remainder[best]) best = c;
    }
    ++quota[best];
    remainder[best] = -1.0;
    ++assigned;
  }

  SplitRecords out;
  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t c = 0; c < kIrisClasses; ++c) {
    auto idx = by_class[c];
    std::shuffle(idx.begin(), idx.end(), rng);
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]));
    test_idx.insert(test_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]), idx.end());
  }
  std::shuffle(train_idx.begin(), train_idx.end(), rng);
  for (auto i : train_idx) out.train.push_back(records[i]);
  for (auto i : test_idx) out.test.push_back(records[i]);
  return out;
}

Dataset prepare_iris(std::span<const RawIrisRecord> records, std::uint64_t seed, std::size_t train_size) {
  const SplitRecords parts = split(records, seed, train_size);
  const FeatureScaler scaler = FeatureScaler::fit(parts.train);
  auto convert = [&](const RawIrisRecord& r) {
    const auto scaled = scaler.apply(r);
    return Sample{sensor_expand(scaled), encode_targets(r.label), r.label};
  };
  Dataset data;
  for (const auto& r : parts.train) data.train.push_back(convert(r));
  for (const auto& r : parts.test) data.test.push_back(convert(r));
  return data;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const std::size_t width = data.train.empty() ? 0 : data.train.front().x.size();
  out << "split,index,label";
  for (std::size_t i = 0; i < width; ++i) out << ",x" << i;
  for (std::size_t n = 0; n < kIrisClasses; ++n) out << ",Y" << n;
  out << '\n';
  auto emit = [&](const char* name, const std::vector<Sample>& samples) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out << name << ',' << i << ',' << label_name(samples[i].label);
      for (double v : samples[i].x) out << ',' << fmt::format("{:.17g}", v);
      for (double v : samples[i].target) out << ',' << fmt::format("{:g}", v);
      out << '\n';
    }
  };
  emit("train", data.train);
  emit("test", data.test);
}

}  // namespace ahnn
