#pragma once

#include <stdexcept>
#include <string>

namespace zrplab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Rate-function validation failures; `offending_k` names the first bad occupancy.
class RateValidationError : public Error {
public:
  enum class Code { NonZeroAtOrigin, NotMonotone, LipschitzViolated, NotPositive };
  RateValidationError(Code code, int offending_k, const std::string& what)
      : Error(what), code(code), offending_k(offending_k) {}
  Code code;
  int offending_k;
};

class EmptySystemError : public Error {
public:
  EmptySystemError() : Error("total jump rate is zero (empty system)") {}
};

class AllEmptyError : public Error {
public:
  AllEmptyError() : Error("all coupled replicas are empty") {}
};

class DivergentPartitionFunction : public Error {
public:
  explicit DivergentPartitionFunction(double alpha)
      : Error("partition function diverges at fugacity " + std::to_string(alpha)) {}
};

class TruncationTooSmall : public Error {
public:
  explicit TruncationTooSmall(const std::string& what) : Error(what) {}
};

class DensityUnreachable : public Error {
public:
  explicit DensityUnreachable(double rho)
      : Error("no finite fugacity achieves density " + std::to_string(rho)) {}
};

class NoConvergence : public Error {
public:
  explicit NoConvergence(const std::string& what) : Error(what) {}
};

class NonLatticeIncrement : public Error {
public:
  explicit NonLatticeIncrement(int index)
      : Error("walk increment at step " + std::to_string(index) +
              " is not a non-negative lattice multiple"),
        index(index) {}
  int index;
};

class MaxAttemptsExceeded : public Error {
public:
  explicit MaxAttemptsExceeded(long long attempts)
      : Error("envelope rejection sampler exhausted " + std::to_string(attempts) +
              " attempts"),
        attempts(attempts) {}
  long long attempts;
};

class InconsistentEvent : public Error {
public:
  explicit InconsistentEvent(const std::string& what) : Error(what) {}
};

class StabilityViolated : public Error {
public:
  StabilityViolated(double dt, double dt_max)
      : Error("explicit step dt=" + std::to_string(dt) + " exceeds stability bound " +
              std::to_string(dt_max)) {}
};

class NonpositiveField : public Error {
public:
  explicit NonpositiveField(int index)
      : Error("field is nonpositive at grid index " + std::to_string(index)), index(index) {}
  int index;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace zrplab
