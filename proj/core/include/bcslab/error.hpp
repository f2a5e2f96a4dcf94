#pragma once

#include <stdexcept>
#include <string>

namespace bcslab {

// Failure taxonomy. Every throwing code path in the library uses Error so
// callers (CLI, sweep rows) can report the kind without string matching.
enum class ErrorKind {
  domain,          // argument outside the operator's domain (r <= 0, a >= 0, ...)
  integrability,   // a required integral does not converge at the working tolerance
  resolution,      // grid cannot resolve the requested regime (p_max too small, ...)
  near_singular,   // linear solve at a resonance / bound-state threshold
  not_symmetric,   // symmetric-only routine fed a non-symmetric matrix
  bound_state,     // potential supports a bound state where none is allowed
  fit,             // asymptote fit residual exceeds tolerance
  convergence,     // iteration failed to converge within the step budget
  bracket,         // bisection bracket invalid (no sign change)
  config,          // config file syntax or semantics
  io,              // file I/O
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace bcslab
