#ifndef HARDYOP_ERRORS_HPP
#define HARDYOP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardyop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed symbol text. `position` is the 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Denominator has a root in the closed unit disk.
class DenominatorError : public Error {
 public:
  using Error::Error;
};

/// A symbol required to map the disk into itself does not.
class SelfmapError : public Error {
 public:
  using Error::Error;
};

/// Rational degree would exceed the configured cap.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Input violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Computed quantities contradict a proven inequality (usually truncation too small).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace hardyop

#endif  // HARDYOP_ERRORS_HPP
