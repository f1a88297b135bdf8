#pragma once

#include <stdexcept>
#include <string>

namespace propaxis {

// Coarse error categories. The CLI maps every Error to exit code 2
// (data error); anything else that escapes is a bug.
enum class ErrorKind {
    Shape,        // matrix and parameter shape mismatches
    Io,           // unreadable file / unwritable path
    Malformed,    // parseable but invalid content (truncated payload, bad line)
    Unsupported,  // recognized file but unsupported variant (e.g. PGM maxval)
    Domain,       // argument outside its documented range
    Data,         // semantically invalid input (unknown id, empty graph, ...)
    Numeric,      // non-finite values where finite ones are required
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace propaxis
