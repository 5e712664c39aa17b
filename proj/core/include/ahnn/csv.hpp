#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ahnn {

// Provenance line written above every artifact's header row.
struct ArtifactStamp {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  std::string comment() const;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const ArtifactStamp& stamp, const std::vector<std::string>& columns);

  CsvWriter& cell(double value);
  CsvWriter& cell(std::int64_t value);
  CsvWriter& cell(std::uint64_t value);
  CsvWriter& cell(int value) { return cell(static_cast<std::int64_t>(value)); }
  CsvWriter& cell(std::string_view value);
  void end_row();

  std::ofstream& stream() { return out_; }

 private:
  void separator();

  std::ofstream out_;
  bool row_started_ = false;
};

std::string format_double(double value);

}  // namespace ahnn
