#include "ahnn/csv.hpp"

#include <fmt/format.h>

#include "ahnn/errors.hpp"

namespace ahnn {

std::string ArtifactStamp::comment() const {
  return fmt::format("# ahnn config_hash={:016x} seed={}", config_hash, seed);
}

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const ArtifactStamp& stamp,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error("cannot write " + path.string());
  out_ << stamp.comment() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

}  // namespace ahnn
