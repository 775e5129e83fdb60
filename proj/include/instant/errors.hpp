#pragma once

#include <stdexcept>
#include <string>

namespace instant {

/// A caller broke an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A machine description is malformed or a configuration refers to an
/// unknown state or symbol.
class SpecViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A construction would exceed a configured size limit.
class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two independent evaluations of the same quantity disagree.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class UnsupportedError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace instant
