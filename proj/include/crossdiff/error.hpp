#pragma once

#include <stdexcept>
#include <string>

namespace crossdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Index computation that cannot be carried out (bad input or uncertifiable cutoff).
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Nonlinear iteration that failed to produce a root.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace crossdiff
