#ifndef DIBVP_ERRORS_HPP
#define DIBVP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dibvp {

/// Malformed inputs: shape mismatches, invalid parameter combinations.
class structural_error : public std::invalid_argument {
public:
  explicit structural_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Scenario / configuration problems (maps to CLI exit code 2).
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A computation that needs derivatives or regularity the data cannot provide.
class analysis_error : public std::runtime_error {
public:
  explicit analysis_error(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values detected during time integration (CLI exit code 3).
class divergence_error : public std::runtime_error {
public:
  divergence_error(const std::string& what, double when)
      : std::runtime_error(what), time(when) {}
  double time;
};

} // namespace dibvp

#endif
