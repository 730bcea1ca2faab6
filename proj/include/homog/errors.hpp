#pragma once

#include <stdexcept>
#include <string>

namespace homog {

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& m) : std::runtime_error(m) {}
};

struct SamplerStallError : std::runtime_error {
  explicit SamplerStallError(const std::string& m) : std::runtime_error(m) {}
};

struct AmbiguousWindingError : std::runtime_error {
  explicit AmbiguousWindingError(const std::string& m) : std::runtime_error(m) {}
};

struct MatrixNotPsdError : std::runtime_error {
  explicit MatrixNotPsdError(const std::string& m) : std::runtime_error(m) {}
};

struct SmoothingBudgetError : std::runtime_error {
  explicit SmoothingBudgetError(const std::string& m) : std::runtime_error(m) {}
};

struct TruncationInfeasibleError : std::runtime_error {
  explicit TruncationInfeasibleError(const std::string& m) : std::runtime_error(m) {}
};

struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& m) : std::runtime_error(m) {}
};

struct MissingArtifactError : std::runtime_error {
  explicit MissingArtifactError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace homog
