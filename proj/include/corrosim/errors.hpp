#pragma once

#include <stdexcept>

namespace corrosim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed configuration document, or I/O failure while reading one.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A parameter violates a physical invariant; message names the field.
class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Unknown or dimensionally wrong unit token.
class UnitError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Numerical failure: lost bracket, non-convergence, rejected step.
class SolverError : public Error {
public:
    using Error::Error;
};

// Calibration dataset schema violation; message carries the line number.
class DatasetError : public Error {
public:
    using Error::Error;
};

} // namespace corrosim
