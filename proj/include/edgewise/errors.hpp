#pragma once

#include <stdexcept>
#include <string>

namespace edgewise {

/** \brief Failure categories; each maps to a stable CLI exit code. */
enum class ErrorKind {
  domain,      ///< argument outside the operation's precondition
  range,       ///< result not representable
  model,       ///< potential or weight rejected by a structural check
  numerical,   ///< integration, factorization or convergence failure
  pole         ///< trajectory ran into a movable pole
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class PoleError : public Error {
 public:
  PoleError(double x, const std::string& what) : Error(ErrorKind::pole, what), x_(x) {}
  double abscissa() const noexcept { return x_; }

 private:
  double x_;
};

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return 2;
    case ErrorKind::model: return 3;
    default: return 4;
  }
}

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace edgewise
