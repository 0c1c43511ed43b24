#pragma once

#include <stdexcept>
#include <string>

namespace abv {

enum class ErrorCode {
  InvalidArgument = 1,
  BranchMismatch,
  NonIntegrableInput,
  SingularPoint,
  NonzeroMean,
  SupportMismatch,
  ResolutionInsufficient,
  TailTooHeavy,
  DegenerateSampler,
  ZeroDenominator,
  NodeOutsideExtent,
  NanDetected,
  Io,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace abv
