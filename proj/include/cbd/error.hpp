#pragma once

#include <stdexcept>
#include <string>

namespace cbd {

// Malformed dimensions or mismatched slot sets. Never used for "no solution".
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unknown context or content label.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Assignment space 2^K exceeds the configured slot cap.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::size_t slots, std::size_t cap)
      : std::runtime_error("system has " + std::to_string(slots) +
                           " slots, exceeding the cap of " + std::to_string(cap) +
                           " (raise it with --max-slots)"),
        slots_(slots),
        cap_(cap) {}

  std::size_t slots() const noexcept { return slots_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t slots_;
  std::size_t cap_;
};

// Argument outside its mathematical domain (e.g. a probability > 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation called on an input that does not satisfy its precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cbd
