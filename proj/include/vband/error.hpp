#ifndef VBAND_ERROR_HPP_
#define VBAND_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace vband {

/// Invalid user-facing configuration: grid sizes, bounds, orders, keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state or a failed internal numerical construction.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Peak/rate fitting could not be performed on the given window.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A diagnostic was requested that the scenario cannot provide.
class UnsupportedDiagnostic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vband

#endif  // VBAND_ERROR_HPP_
