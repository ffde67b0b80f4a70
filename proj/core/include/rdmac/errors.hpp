#pragma once

#include <stdexcept>
#include <string>

namespace rdmac {

// Bad user input: malformed config files, unknown keys, scheme/pair mismatch.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural mismatch between operands (lengths, row/column counts).
class dimension_error : public std::invalid_argument {
public:
    explicit dimension_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed file content; carries the 1-based line number.
class parse_error : public std::runtime_error {
public:
    parse_error(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A randomized construction ran out of attempts or an input violates a
// construction precondition (e.g. combining rows that share a column).
class construction_error : public std::runtime_error {
public:
    explicit construction_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical cross-checks disagreed beyond the configured tolerance.
class tolerance_error : public std::runtime_error {
public:
    explicit tolerance_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rdmac
