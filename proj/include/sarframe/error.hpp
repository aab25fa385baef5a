#pragma once

#include <stdexcept>
#include <string>

namespace sarframe {

/// Invalid input data or violated precondition (CLI exit code 4).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed scenario/mask documents or bad command-line values (exit code 2).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be opened, read or written (exit code 3).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Binary file present but not a valid SARPH1/SARIM1 document (exit code 4).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sarframe
