#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fuzzmarket {

// Bad scenario, rule file, CSV, or CLI input. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// Non-finite or non-positive price produced while simulating. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& message, std::size_t step)
      : std::runtime_error(message), step_(step) {}

  // Index of the price the failed transition would have produced.
  std::size_t step() const noexcept { return step_; }
  void set_step(std::size_t step) noexcept { step_ = step; }

 private:
  std::size_t step_;
};

}  // namespace fuzzmarket
