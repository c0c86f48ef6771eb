#pragma once

#include <stdexcept>
#include <string>

namespace shieldsim {

/// Invalid experiment configuration; `line` is 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A numerical method failed to reach its requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series never crossed the requested level within its time grid.
class NoCrossingError : public std::runtime_error {
 public:
  NoCrossingError(const std::string& what, double horizon)
      : std::runtime_error(what + " (horizon t = " + std::to_string(horizon) + ")"),
        horizon_(horizon) {}
  /// Last grid time; a lower bound for the missing crossing.
  double horizon() const { return horizon_; }

 private:
  double horizon_;
};

}  // namespace shieldsim
