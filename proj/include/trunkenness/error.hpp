#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace trunk {

// Base of every error the library raises. kind() is the stable class name
// reported by the CLI and mapped to a status code by the C API.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define TRUNK_DECLARE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const noexcept override { return #Name; }   \
  }

TRUNK_DECLARE_ERROR(InvalidArgument);
TRUNK_DECLARE_ERROR(LevelOutOfRange);
TRUNK_DECLARE_ERROR(TubeNotEmbedded);
TRUNK_DECLARE_ERROR(NotCoprime);
TRUNK_DECLARE_ERROR(DegenerateIntersection);
TRUNK_DECLARE_ERROR(StepTooLarge);
TRUNK_DECLARE_ERROR(KnotsTooClose);
TRUNK_DECLARE_ERROR(NonIntegerLinking);
TRUNK_DECLARE_ERROR(IoError);

#undef TRUNK_DECLARE_ERROR

/// One diagnostic produced while validating a configuration document.
struct ConfigIssue {
  int line = 0;  // 0 when the issue is not tied to a line (missing key)
  std::string field;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const char* kind() const noexcept override { return "ConfigError"; }
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

}  // namespace trunk
