#pragma once

#include <stdexcept>
#include <string>

namespace kleinflow {

// Reason tags let callers distinguish "no Klein regime at all" (V <= 2k)
// from "frequency outside the Klein window" without parsing messages.
enum class DomainFault {
  no_klein_regime,       // V <= 2*kappa
  outside_klein_window,  // k not in (0, sqrt(V^2 - 2*kappa*V))
  bad_argument,
};

class DomainError : public std::runtime_error {
public:
  DomainError(DomainFault fault, const std::string& what)
      : std::runtime_error(what), fault_(fault) {}
  DomainFault fault() const noexcept { return fault_; }

private:
  DomainFault fault_;
};

class QuadratureNotConverged : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class WindowTooSmall : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ZeroNorm : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidStart : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace kleinflow
