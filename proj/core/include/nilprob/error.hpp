#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilprob {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree (vector dimensions, algebra parameters, map domains).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exhaustive computation was asked to exceed its configured size cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::string what, std::uint64_t requested, std::uint64_t cap)
      : Error(what + ": requested " + std::to_string(requested) +
              " exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

/// A conjugacy orbit grew past the configured orbit cap.
class OrbitOverflow : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

}  // namespace nilprob
