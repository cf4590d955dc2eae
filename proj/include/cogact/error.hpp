#pragma once

#include <stdexcept>
#include <string>

namespace cogact {

/// Caller violated an operation's precondition (bad argument, wrong modality, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file could not be read or parsed. Carries the location when known.
class LoadError : public std::runtime_error {
public:
    explicit LoadError(const std::string& what) : std::runtime_error(what) {}

    LoadError(const std::string& file, std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          file_(file), line_(line), column_(column) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string file_;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

/// Training hit the epoch or node-count guard before reaching a fixed point.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cogact
