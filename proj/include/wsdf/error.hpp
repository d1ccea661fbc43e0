#pragma once

#include <stdexcept>
#include <string>

namespace wsdf {

// Coarse error classes; the CLI maps each one to its own exit code.
enum class ErrorCategory {
  kInvalidArgument,  // precondition or config violation
  kIo,               // missing/unreadable/unwritable file, malformed file
  kDomain,           // math domain error (e.g. probability outside (0,1))
  kNumeric,          // divergence or other numerical breakdown
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCategory::kInvalidArgument, message);
}

}  // namespace wsdf
