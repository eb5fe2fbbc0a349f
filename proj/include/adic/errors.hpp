#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (bad pair, zero-length interval, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// A computation contradicted an identity the theory guarantees. Seeing one of
// these on valid input means a falsified claim, not a usage mistake.
struct ConsistencyError : Error {
    using Error::Error;
};

// A bounded search ended without a verdict (distinct from falsification).
struct InconclusiveError : Error {
    using Error::Error;
};

// Malformed input text; carries 1-based line/column when known.
struct ParseError : Error {
    std::size_t line = 0;
    std::size_t column = 0;
    ParseError(const std::string& msg, std::size_t line_, std::size_t column_)
        : Error(msg), line(line_), column(column_) {}
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace adic
