#pragma once

#include <stdexcept>
#include <string>

namespace topictrend {

// Broad failure classes; the CLI maps these onto exit codes.
enum class ErrorClass {
  kUsage,      // bad arguments or configuration
  kData,       // malformed or empty input
  kNumerical,  // non-finite values, degenerate inputs to a computation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), cls_(cls), kind_(std::move(kind)) {}

  ErrorClass error_class() const noexcept { return cls_; }
  // Short machine-readable name such as "EmptyCorpus".
  const std::string& kind() const noexcept { return kind_; }

 private:
  ErrorClass cls_;
  std::string kind_;
};

inline Error data_error(std::string kind, const std::string& message) {
  return Error(ErrorClass::kData, std::move(kind), message);
}

inline Error numerical_error(std::string kind, const std::string& message) {
  return Error(ErrorClass::kNumerical, std::move(kind), message);
}

inline Error usage_error(std::string kind, const std::string& message) {
  return Error(ErrorClass::kUsage, std::move(kind), message);
}

}  // namespace topictrend
