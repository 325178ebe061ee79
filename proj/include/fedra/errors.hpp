#pragma once

#include <stdexcept>
#include <string>

namespace fedra {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text parsing failure with 1-based position info. `line` is 0 when the
// input is a single expression rather than a file.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_),
          col(col_) {}
    int line;
    int col;
};

struct IndexError : Error {
    using Error::Error;
};

struct FamilyMismatch : Error {
    using Error::Error;
};

// Raised when a truncated computation would need data beyond a configured
// arity or order bound; `param` names the limiting parameter.
struct CapacityError : Error {
    CapacityError(const std::string& msg, std::string param_) : Error(msg), param(std::move(param_)) {}
    std::string param;
};

}  // namespace fedra
