#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphite {

using WordId = std::uint32_t;
using InstanceId = std::uint32_t;
using LabelId = std::uint32_t;
using EdgeOffset = std::uint64_t;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised while reading a JSONL dataset; carries the 1-based line number.
class DatasetError : public Error {
 public:
  DatasetError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ModelFormatError : public Error {
 public:
  explicit ModelFormatError(const std::string& what) : Error(what) {}
};

}  // namespace graphite
