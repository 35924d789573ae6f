#pragma once

#include <stdexcept>
#include <string>

namespace herald {

/// Base for failures caused by the physics model (truncation, inputs outside
/// the modelled photon range). The CLI maps these to exit status 3.
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A creation or mixing step would push an occupation past the register cutoff.
class TruncationError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

/// The state lies outside the range a channel is defined on (e.g. three or
/// more photons entering a two-photon absorber).
class UnsupportedInputError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

/// Unknown or colliding subsystem label.
class LabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration (parameters out of range, unparsable spec strings).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace herald
