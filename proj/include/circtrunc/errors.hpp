#ifndef CIRCTRUNC_ERRORS_HPP
#define CIRCTRUNC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace circtrunc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric failures: a quantity the caller asked for does not exist for these inputs.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Resultant vector is (numerically) zero, so no mean direction exists.
class UndefinedDirection : public NumericError {
 public:
  explicit UndefinedDirection(const std::string& what = "direction undefined: zero resultant")
      : NumericError(what) {}
};

class UndefinedZeta : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateSpatialMedian : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateSample : public NumericError {
 public:
  using NumericError::NumericError;
};

class ZeroDensity : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Contract violations by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyArc : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidParameter : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ConditionsNotMet : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ModelEstimatorMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace circtrunc

#endif  // CIRCTRUNC_ERRORS_HPP
