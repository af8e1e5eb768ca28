// errors.hpp -- exception types shared by all modules.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbound {

/// Precondition violation by the caller (bad parameters, malformed input).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An exhaustive request exceeds the documented search caps.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A construction that a theorem guarantees has failed. Always a bug.
class ConstructionDefect : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The input is too short for the guaranteed construction; carries the
/// message length that would be required.
class ThresholdNotMet : public std::runtime_error {
public:
    ThresholdNotMet(const std::string& what, double required_length)
        : std::runtime_error(what), required_length_(required_length) {}
    [[nodiscard]] double required_length() const noexcept { return required_length_; }

private:
    double required_length_;
};

}  // namespace qbound
