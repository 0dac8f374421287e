#pragma once

#include <stdexcept>
#include <string>

namespace stcmc {

// Error categories mirrored by the C API status codes.
enum class ErrorCode : int {
  ok = 0,
  domain = 1,       // chart point outside the model domain
  geometry = 2,     // degenerate mesh / invalid embedding
  regime = 3,       // null or near-null expansion regime
  numerical = 4,    // solver failed to converge
  config = 5,       // bad configuration
  io = 6,           // file read/write failure
  unavailable = 7,  // requested datum not determined by the model
  size = 8,         // resource guard tripped
  invalid = 9,      // bad argument
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::domain, w) {}
};
struct GeometryError : Error {
  explicit GeometryError(const std::string& w) : Error(ErrorCode::geometry, w) {}
};
struct RegimeError : Error {
  explicit RegimeError(const std::string& w) : Error(ErrorCode::regime, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorCode::numerical, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::config, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::io, w) {}
};
struct UnavailableError : Error {
  explicit UnavailableError(const std::string& w) : Error(ErrorCode::unavailable, w) {}
};
struct SizeError : Error {
  explicit SizeError(const std::string& w) : Error(ErrorCode::size, w) {}
};
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorCode::invalid, w) {}
};

}  // namespace stcmc
