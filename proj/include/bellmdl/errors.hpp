#pragma once

#include <stdexcept>
#include <string>

namespace bellmdl {

/// Argument or parameter outside its documented domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// An iterative routine exhausted its budget before reaching tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File or stream failure while writing an artifact.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bellmdl
