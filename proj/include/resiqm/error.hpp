#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace resiqm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical breakdown: singular system, non-finite values, invariant breach.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or argument, carrying the offending field path.
class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path))
    {
    }

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Raised by scenario runners; records the step at which the failure occurred.
class StepFailure : public NumericalError {
public:
    StepFailure(std::size_t step, const std::string& message)
        : NumericalError("step " + std::to_string(step) + ": " + message), step_(step)
    {
    }

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace resiqm
