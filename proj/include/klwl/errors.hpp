#pragma once

#include <stdexcept>
#include <string>

namespace klwl {

// Bad argument values (out-of-range ids, invalid parameters).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed input documents. Carries a 1-based line number when known.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
    int line;
};

// Unsupported combination of options.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Work refused because it exceeds a budget (tuples, retries, search steps).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation called in the wrong object state.
struct StateError : std::logic_error {
    explicit StateError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace klwl
