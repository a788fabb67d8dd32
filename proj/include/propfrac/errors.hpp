#pragma once

#include <stdexcept>
#include <string>

namespace propfrac {

/// Expression text could not be parsed. Carries the byte offset of the
/// first offending character.
class parse_error : public std::runtime_error {
public:
    parse_error(std::string msg, std::size_t offset)
        : std::runtime_error(msg + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A function was evaluated outside its mathematical domain
/// (ln/sqrt of a negative number, division by zero, gamma pole, ...).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A kernel function violated its contract (non-positive derivative,
/// inversion failure, point outside the declared domain).
class kernel_error : public std::runtime_error {
public:
    explicit kernel_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace propfrac
