#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace asymcause {

/// Broad failure class; the CLI maps each one onto its own exit code.
enum class ErrorCategory { config, data, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

// --- configuration -----------------------------------------------------------

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

/// A restriction that cannot express Granger non-causality (e.g. cause == effect).
class InvalidRestrictionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// --- data --------------------------------------------------------------------

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class LengthError : public DataError {
public:
    using DataError::DataError;
};

/// Shapes that must agree do not (e.g. component series of different length).
class StructuralError : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    using DataError::DataError;
};

class MissingColumnError : public ParseError {
public:
    using ParseError::ParseError;
};

class DateParseError : public ParseError {
public:
    using ParseError::ParseError;
};

class MissingValueError : public DataError {
public:
    MissingValueError(const std::string& what, std::size_t row) : DataError(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class GapError : public DataError {
public:
    GapError(const std::string& what, std::string period) : DataError(what), period_(std::move(period)) {}
    const std::string& period() const noexcept { return period_; }

private:
    std::string period_;
};

class DuplicateDateError : public DataError {
public:
    using DataError::DataError;
};

class AlignmentError : public DataError {
public:
    using DataError::DataError;
};

class FetchError : public DataError {
public:
    FetchError(const std::string& what, int status) : DataError(what), status_(status) {}
    /// HTTP status, or -1 when no response was received.
    int status() const noexcept { return status_; }

private:
    int status_;
};

// --- numerics ----------------------------------------------------------------

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Wraps a failure with the pipeline stage it happened in, keeping its category.
class StageError : public Error {
public:
    StageError(const std::string& stage, const Error& cause)
        : Error(cause.category(), "stage '" + stage + "' failed: " + cause.what()), stage_(stage) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace asymcause
