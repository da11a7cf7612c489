#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xgram {

// Precondition violations are reported as std::invalid_argument.

/// Input data cannot support the requested computation (ties, empty
/// exceedance sets, malformed files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constant series: the threshold cannot separate extremes from the bulk.
class TieError : public DataError {
public:
    using DataError::DataError;
};

/// No observation exceeds the resolved threshold.
class DegenerateThresholdError : public DataError {
public:
    using DataError::DataError;
};

/// Curve and centering evaluated on different grids.
class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown: non-finite state, indefinite covariance, ...
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SimulationError : public NumericalError {
public:
    SimulationError(std::size_t index, const std::string& what)
        : NumericalError(what + " (first bad index " + std::to_string(index) + ")"), index_(index) {}

    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class NonPsdError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace xgram
