#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptcure {

/// Base class for all library-specific failures. Argument-domain violations
/// (negative times, probabilities outside [0,1)) throw std::domain_error and
/// bad construction parameters throw std::invalid_argument instead.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// CSV ingestion failure. Carries the 1-based data row (0 = header or file
/// level) and the field at fault so callers can point at the offending cell.
class ParseError : public Error {
  public:
    explicit ParseError(const std::string& message, std::size_t row = 0, std::string field = {})
        : Error(message), row_(row), field_(std::move(field)) {}

    std::size_t row() const { return row_; }
    const std::string& field() const { return field_; }

  private:
    std::size_t row_;
    std::string field_;
};

/// Partition produced no usable groups, or the spec selected no levels.
class SegmentationError : public Error {
  public:
    using Error::Error;
};

/// The data cannot identify the model: no recovery events at all, or no
/// usable event times.
class UnidentifiableError : public Error {
  public:
    using Error::Error;
};

} // namespace ptcure
