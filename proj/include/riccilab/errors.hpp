#pragma once

#include <stdexcept>
#include <string>

namespace riccilab {

// Failure taxonomy shared by all modules.  Every throw site names the
// offending quantity in the message so batch drivers can report it verbatim.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMetric : Error {
  using Error::Error;
};

struct ValenceMismatch : Error {
  using Error::Error;
};

struct ToleranceExceeded : Error {
  using Error::Error;
};

struct NonpositiveTime : Error {
  using Error::Error;
};

struct InvariantViolation : Error {
  using Error::Error;
};

struct OutsideValidityWindow : Error {
  using Error::Error;
};

struct WindowEmpty : Error {
  using Error::Error;
};

struct UnstableConstant : Error {
  using Error::Error;
};

struct ExtinctionReached : Error {
  ExtinctionReached(const std::string& msg, double last_valid)
      : Error(msg), last_valid_time(last_valid) {}
  double last_valid_time;
};

struct StepRejected : Error {
  using Error::Error;
};

struct ConfigError : Error {
  ConfigError(const std::string& field_name, const std::string& msg)
      : Error("config field '" + field_name + "': " + msg), field(field_name) {}
  std::string field;
};

struct ScenarioFailure : Error {
  ScenarioFailure(const std::string& check_name, const std::string& msg)
      : Error("check '" + check_name + "' failed: " + msg), check(check_name) {}
  std::string check;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace riccilab
