#pragma once

#include <stdexcept>
#include <string>

namespace sublorentz {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A field evaluation produced a non-finite value.
struct EvaluationError : Error {
  using Error::Error;
};

// Metric degenerate or with the wrong signature at a queried point.
struct MetricError : Error {
  using Error::Error;
};

// Integration left the finite domain; carries the last good parameter value.
struct DivergenceError : Error {
  DivergenceError(const std::string& what, double t)
      : Error(what), last_good_t(t) {}
  double last_good_t;
};

// A non-timelike sample where a timelike one is required.
struct CausalityError : Error {
  CausalityError(const std::string& what, std::size_t index)
      : Error(what), sample_index(index) {}
  std::size_t sample_index;
};

// Invalid configuration, scenario text, or sampling spec.
struct SpecError : Error {
  using Error::Error;
};

// Velocity handed to the abnormal (a0 = 0) equations is not in ker F.
struct AbnormalityError : Error {
  using Error::Error;
};

}  // namespace sublorentz
