#ifndef TOPOSVAL_ERROR_HPP
#define TOPOSVAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace toposval {

enum class ErrorKind {
  MalformedInput,      // input violates a structural precondition
  NotFound,            // unknown object/morphism/element label
  CompositionMismatch, // non-composable morphism pair
  IllConditioned,      // numeric-mode eigenvalue clusters below tolerance
  Parse,               // scenario / description text could not be parsed
  ResourceLimit,       // enumeration would exceed desk-scale bounds
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_malformed(const std::string& msg) {
  throw Error(ErrorKind::MalformedInput, msg);
}

[[noreturn]] inline void throw_not_found(const std::string& msg) {
  throw Error(ErrorKind::NotFound, msg);
}

[[noreturn]] inline void throw_parse(const std::string& msg) {
  throw Error(ErrorKind::Parse, msg);
}

} // namespace toposval

#endif
