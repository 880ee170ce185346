#pragma once

#include <stdexcept>
#include <string>

namespace vbisnr {

/// Caller supplied data that violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is well formed but carries nothing measurable (e.g. no clean VBI lines).
class MeasurementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vbisnr
