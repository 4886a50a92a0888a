#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exogate {

// Non-finite angle or torque handed to a model function.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Physically meaningless subject or policy parameters.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Controller / gate / scenario configuration that violates its invariants.
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller broke a sequencing contract (e.g. time went backwards).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed frame, scenario or sweep file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simulation produced a non-finite state.
class SimulationAbort : public std::runtime_error {
 public:
  SimulationAbort(std::size_t tick, const std::string& what)
      : std::runtime_error("tick " + std::to_string(tick) + ": " + what), tick_(tick) {}

  std::size_t tick() const { return tick_; }

 private:
  std::size_t tick_;
};

}  // namespace exogate
