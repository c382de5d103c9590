#pragma once

#include <stdexcept>
#include <string>

namespace mecdep {

/// Invalid or unreadable model configuration. CLI exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-convergence, singular system or a failed internal cross-check. CLI exit status 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A KPI ratio whose denominator vanishes while its weight does not. CLI exit status 4.
class UndefinedKpiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mecdep
