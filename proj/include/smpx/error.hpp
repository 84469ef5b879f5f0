#ifndef SMPX_ERROR_HPP
#define SMPX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace smpx {

// Error categories. The numeric values double as CLI exit codes and C API
// status codes, so they must stay in sync with smpx.h.
enum class ErrorCode : int {
  config = 2,
  numerical = 3,
  check_failed = 4,
  io = 5,
  input = 6,
  domain = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::config, w) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& w)
      : Error(ErrorCode::numerical, w) {}
};

struct InputError : Error {
  explicit InputError(const std::string& w) : Error(ErrorCode::input, w) {}
};

// Point outside the domain (or outside its relative interior where ω′ is
// required).
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::domain, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::io, w) {}
};

}  // namespace smpx

#endif
