#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xorwl {

/// Malformed input: unknown ids, inconsistent sizes, rejected shapes.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Work would exceed a configured capacity guard.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text or JSON input could not be parsed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A strategy emitted a move that breaks the game rules.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Player 1 was asked for a move from a position he does not win.
class NoWinningMove : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No labelling/extension satisfies the requested constraints.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Peeling got stuck on a left set with empty boundary.
class NotExpandingError : public std::runtime_error {
 public:
  NotExpandingError(const std::string& what, std::vector<std::uint32_t> stuck)
      : std::runtime_error(what), stuck_(std::move(stuck)) {}
  const std::vector<std::uint32_t>& stuck() const { return stuck_; }

 private:
  std::vector<std::uint32_t> stuck_;
};

class ExpanderNotFound : public std::runtime_error {
 public:
  ExpanderNotFound(const std::string& what, std::vector<std::uint64_t> seeds)
      : std::runtime_error(what), seeds_(std::move(seeds)) {}
  const std::vector<std::uint64_t>& seeds_tried() const { return seeds_; }

 private:
  std::vector<std::uint64_t> seeds_;
};

}  // namespace xorwl
