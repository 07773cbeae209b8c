#pragma once

#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace ringcav {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical or numerical input is outside its admissible range.
class InvalidParameter : public Error {
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

public:
    InvalidParameter(std::string field, double value, std::string bound)
        : Error(field + " = " + format(value) + " violates " + bound),
          field_(std::move(field)), value_(value), bound_(std::move(bound)) {}

    /// For non-numeric inputs (file names, enum spellings).
    InvalidParameter(std::string field, std::string message)
        : Error(field + ": " + message), field_(std::move(field)),
          value_(std::numeric_limits<double>::quiet_NaN()), bound_(std::move(message)) {}

    const std::string& field() const noexcept { return field_; }
    double value() const noexcept { return value_; }
    const std::string& bound() const noexcept { return bound_; }

private:
    std::string field_;
    double value_;
    std::string bound_;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// The linearized dynamics has no steady state at the requested point.
class UnstableOperatingPoint : public Error {
public:
    using Error::Error;
};

/// Two routes that must agree did not. Always a bug.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

class NoStablePoint : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

class UnknownKey : public ParseError {
public:
    UnknownKey(int line, int column, std::string key)
        : ParseError(line, column, "unknown key '" + key + "'"), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace ringcav
