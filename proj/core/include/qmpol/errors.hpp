#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmpol {

enum class ErrorKind {
  domain,                    // input outside an operation's domain
  unsupported_configuration, // valid input the library deliberately refuses
  inconsistency,             // a theorem-guaranteed integrality failed: a bug
};

std::string_view to_string(ErrorKind kind);

/// Exit status used by the command-line tool for each error kind.
int exit_status(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string context = {})
      : std::runtime_error(message), kind_(kind), context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string context_;
};

[[noreturn]] inline void throw_domain(const std::string& msg, std::string ctx = {}) {
  throw Error(ErrorKind::domain, msg, std::move(ctx));
}
[[noreturn]] inline void throw_unsupported(const std::string& msg, std::string ctx = {}) {
  throw Error(ErrorKind::unsupported_configuration, msg, std::move(ctx));
}
[[noreturn]] inline void throw_inconsistency(const std::string& msg, std::string ctx = {}) {
  throw Error(ErrorKind::inconsistency, msg, std::move(ctx));
}

}  // namespace qmpol
