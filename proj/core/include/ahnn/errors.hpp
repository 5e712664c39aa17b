#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ahnn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration and parameter validation failures (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data failures (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingFile : public DataError {
 public:
  explicit MissingFile(const std::string& path) : DataError("cannot open " + path) {}
};

class DegenerateFeature : public DataError {
 public:
  explicit DegenerateFeature(std::size_t feature)
      : DataError("feature " + std::to_string(feature) + " is constant on the training split"),
        feature_(feature) {}

  std::size_t feature() const noexcept { return feature_; }

 private:
  std::size_t feature_;
};

class UnknownLabel : public DataError {
 public:
  explicit UnknownLabel(const std::string& label) : DataError("unknown class label '" + label + "'") {}
};

// The feedback circuit requested more gate current than the source can deliver.
class OverdrivePulse : public Error {
 public:
  OverdrivePulse(double requested, double limit)
      : Error("gate current " + std::to_string(requested) + " A exceeds compliance " +
              std::to_string(limit) + " A") {}
};

class InputOutOfRange : public Error {
 public:
  using Error::Error;
};

class WeightOutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace ahnn
