#pragma once

#include <stdexcept>
#include <string>

namespace plp {

enum class ErrorCode {
    Parse = 1,
    RangeRestriction,
    Eval,
    NotTimeConstrained,
    NotStratified,
    NegativeTime,
    PositiveCycle,
    BadProbability,
    Unsupported,
    ZeroEvidence,
    UnknownAtom,
    Io,
};

const char *error_code_name(ErrorCode code);

/// Base of every error raised by the engine. The code maps 1:1 onto the
/// status values of the C API.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ParseError : public Error {
public:
    ParseError(const std::string &msg, int line, int column)
        : Error(ErrorCode::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace plp
