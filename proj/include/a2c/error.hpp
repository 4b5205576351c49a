#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace a2c {

enum class Errc {
  invalid_argument,
  invalid_edge,
  not_strongly_connected,
  orphan_arm,
  isolated_agent,
  dimension_mismatch,
  inaccessible_arm,
  malformed_inbox,
  no_convergence,
  invalid_config,
  io_failure,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Carries one ordered pair (0-based) witnessing the missing path `from -> to`.
class NotStronglyConnected : public Error {
 public:
  NotStronglyConnected(std::size_t from, std::size_t to);
  std::size_t from() const noexcept { return from_; }
  std::size_t to() const noexcept { return to_; }

 private:
  std::size_t from_;
  std::size_t to_;
};

}  // namespace a2c
