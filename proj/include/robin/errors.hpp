#pragma once

#include <stdexcept>
#include <string>

namespace robin {

// Base for every failure raised by the library. The CLI maps each subclass to
// its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mode or pair does not exist for the regime of the Robin parameter.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// A root finder exhausted its iteration cap.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// The candidate pool used to enumerate the square spectrum could not certify
// the requested eigenvalue count.
class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

// Two sign changes of an eigencurve difference landed in one scan cell.
class ScanTooCoarse : public Error {
 public:
  using Error::Error;
};

// The Wronskian zero search found a different number of zeros than theory
// allows.
class CountMismatch : public Error {
 public:
  using Error::Error;
};

// Boundary zero count exceeded the Sturm cap even after refinement.
class CapViolation : public Error {
 public:
  using Error::Error;
};

// Critical-angle formulas disagreed for a candidate point.
class InconsistentTheta : public Error {
 public:
  using Error::Error;
};

// The nodal domain count did not stabilise under grid refinement.
class Unresolved : public Error {
 public:
  using Error::Error;
};

// Invalid user-facing configuration (CLI flags, config files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace robin
