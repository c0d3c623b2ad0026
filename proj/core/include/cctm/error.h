#pragma once

#include <stdexcept>
#include <string>

namespace cctm {

// Broad failure classes. The CLI maps them onto exit codes: kConfig -> 2,
// kData -> 3.
enum class ErrorClass { kConfig, kData };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass error_class, std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message),
        error_class_(error_class),
        kind_(std::move(kind)) {}

  ErrorClass error_class() const { return error_class_; }
  // Short machine-readable name such as "UnknownLabel".
  const std::string& kind() const { return kind_; }

 private:
  ErrorClass error_class_;
  std::string kind_;
};

inline Error ConfigError(std::string kind, const std::string& message) {
  return Error(ErrorClass::kConfig, std::move(kind), message);
}

inline Error DataError(std::string kind, const std::string& message) {
  return Error(ErrorClass::kData, std::move(kind), message);
}

}  // namespace cctm
