#pragma once

#include <stdexcept>
#include <string>

namespace wgf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or broken invariant detected at an API boundary.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Two measures live on different domains.
class DomainMismatchError : public Error {
public:
  using Error::Error;
};

/// A time integration had to stop (CFL collapse, mass defect breach, ...).
class NumericalAbort : public Error {
public:
  using Error::Error;
};

/// A compactly supported profile does not fit the requested domain.
class SupportOverflow : public Error {
public:
  using Error::Error;
};

/// Dirac lattice construction violates the separation requirement.
class NotStationaryError : public Error {
public:
  using Error::Error;
};

/// Requested the nontrivial Kuramoto branch at or below the critical coupling.
class NoNontrivialSolution : public Error {
public:
  using Error::Error;
};

/// Scenario file could not be parsed or validated.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace wgf
