#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace solvcap {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Input that parses but violates a data invariant (missing accident year,
// duplicate key, non-consecutive report pair, ...). May carry several details.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message);
    ValidationError(const std::string& message, std::vector<std::string> details);
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    std::vector<std::string> details_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Optimizer failure after all start points.
class EstimationError : public Error {
public:
    using Error::Error;
};

// API misuse, e.g. likelihood-ratio test on non-nested fits.
class UsageError : public Error {
public:
    using Error::Error;
};

// Discretization grid cannot hold the distribution to the requested accuracy.
class ResolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace solvcap
