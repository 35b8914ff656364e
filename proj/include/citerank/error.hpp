#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citerank {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string &path, std::size_t line, const std::string &what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace citerank
