#pragma once

#include <stdexcept>
#include <string>

namespace laman {

/// Malformed or out-of-contract input (unknown edge, self-loop where forbidden, bad file).
class InputError : public std::invalid_argument {
public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Exact arithmetic left the 64-bit range.
class OverflowError : public std::overflow_error {
public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

/// Internal invariant broken. Signals a bug, never bad input.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace laman
