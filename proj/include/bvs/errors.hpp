#pragma once

#include <stdexcept>
#include <string>

namespace bvs {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input data: parse failures, rank deficiency, shape mismatches.
class DataError : public Error {
  public:
    explicit DataError(const std::string& what) : Error(what) {}
};

/// Numerical failure outside the caller's control (non-convergence, overflow).
class NumericError : public Error {
  public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Adaptive integration ran out of budget. Carries the best estimate so the
/// caller can decide whether it is still usable.
class IntegrationError : public NumericError {
  public:
    IntegrationError(const std::string& what, double best_estimate, double error_bound)
        : NumericError(what), best_estimate(best_estimate), error_bound(error_bound) {}

    double best_estimate;
    double error_bound;
};

/// Requested operation exceeds a configured size cap (e.g. full enumeration
/// of a model space that is too large). The message names the sampling path.
class CapacityError : public Error {
  public:
    explicit CapacityError(const std::string& what) : Error(what) {}
};

/// A submodel fit the response exactly (SSE == 0), which the Bayes factor
/// cannot accept.
class DegenerateFitError : public Error {
  public:
    explicit DegenerateFitError(const std::string& what) : Error(what) {}
};

}  // namespace bvs
