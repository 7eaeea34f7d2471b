#pragma once

#include <stdexcept>
#include <string>

namespace cntq {

/// Base of all pipeline errors. exit_code() maps onto the CLI contract:
/// 2 = config error, 3 = data error, 4 = I/O error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual int exit_code() const { return 1; }
};

/// Malformed configuration: bad config file, invalid grid, impossible split.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

/// Invalid data at a module boundary: dimension mismatches, bad pixel
/// operands, decode failures, schema violations, empty inputs.
class DataError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

/// Filesystem-level failure: missing file, unwritable destination.
class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

}  // namespace cntq
