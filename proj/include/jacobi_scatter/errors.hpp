#pragma once

#include <stdexcept>
#include <string>

namespace jacobi_scatter {

// Library errors carry a short machine-readable code alongside the message;
// the CLI maps codes onto exit statuses and stderr diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& what)
      : Error("invalid_parameter", what) {}
};

struct EdgeProximity : Error {
  explicit EdgeProximity(const std::string& what)
      : Error("edge_proximity", what) {}
};

struct DecayClassError : Error {
  explicit DecayClassError(const std::string& what)
      : Error("decay_class", what) {}
};

struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& what)
      : Error("no_convergence", what) {}
};

struct EigenvalueProximity : Error {
  explicit EigenvalueProximity(const std::string& what)
      : Error("eigenvalue_proximity", what) {}
};

struct OracleMismatch : Error {
  explicit OracleMismatch(const std::string& what)
      : Error("oracle_mismatch", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace jacobi_scatter
