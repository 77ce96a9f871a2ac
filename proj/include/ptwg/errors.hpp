#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptwg {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (negative energy, zero width, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Malformed configuration text.
class ConfigParseError : public Error {
public:
  ConfigParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Well-formed configuration that violates an invariant.
class ConfigValidationError : public Error {
public:
  ConfigValidationError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

// Frequency at or below the waveguide cutoff; the exterior does not propagate.
class BelowCutoffError : public Error {
public:
  using Error::Error;
};

class SingularInterfaceError : public Error {
public:
  using Error::Error;
};

// m22 of the total transfer matrix vanishes: no scattering solution exists at
// this real frequency (spectral singularity).
class ResonancePoleError : public Error {
public:
  using Error::Error;
};

class StiffnessError : public Error {
public:
  StiffnessError(double z, const std::string& what)
      : Error(what + " at z = " + std::to_string(z)), z_(z) {}
  double z() const { return z_; }

private:
  double z_;
};

// Wavepacket overlapping the medium or the grid edges at construction.
class PlacementError : public Error {
public:
  using Error::Error;
};

// Propagated field reached the hard walls, or never left the medium.
class ContaminationError : public Error {
public:
  using Error::Error;
};

class SingularSystemError : public Error {
public:
  using Error::Error;
};

} // namespace ptwg
