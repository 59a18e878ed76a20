#pragma once

#include <stdexcept>
#include <string>

namespace tpais {

/// Raised when a sampler or estimator cannot continue (degenerate weights,
/// depth cap, invalid target values). Bad arguments use std::invalid_argument.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tpais
