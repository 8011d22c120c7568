#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thermaloc {

enum class ErrorKind {
  invalid_size,
  invalid_argument,
  distance_undefined,
  resource_limit,
  not_hermitian,
  invalid_term,
  unsupported_model,
  parity_violation,
  divergent_length,
  out_of_regime,
  bound_inapplicable,
  config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can branch on the category rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace thermaloc
