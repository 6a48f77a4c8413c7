#pragma once

#include <stdexcept>
#include <string>

namespace bnev {

enum class ErrorKind {
  invalid_network,
  unknown_variable,
  unknown_state,
  zero_probability,
  state_space_overflow,
  invalid_template,
  invalid_input,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_network: return "invalid_network";
    case ErrorKind::unknown_variable: return "unknown_variable";
    case ErrorKind::unknown_state: return "unknown_state";
    case ErrorKind::zero_probability: return "zero_probability";
    case ErrorKind::state_space_overflow: return "state_space_overflow";
    case ErrorKind::invalid_template: return "invalid_template";
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bnev
