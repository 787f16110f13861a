#pragma once

#include <stdexcept>
#include <string>

namespace lcf {

/// Error taxonomy mirrored by the C API status codes.
enum class ErrorCode {
  kInvalidArgument,  // bad parameter values, domain violations
  kParse,            // malformed config / file contents
  kConstraint,       // admissibility / feasibility failures
  kMesh,             // meshing failures (empty mesh, disconnected, ...)
  kSolver,           // linear solver did not converge
  kIo,               // file system problems
  kInternal,         // broken invariants; bugs
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace lcf
