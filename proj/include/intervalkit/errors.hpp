#ifndef INTERVALKIT_ERRORS_HPP
#define INTERVALKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace intervalkit {

/// Base class for all intervalkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// The root-finding bracket does not straddle a sign change.
class NoSignChange : public Error {
public:
    explicit NoSignChange(const std::string& what) : Error(what) {}
};

class MaxIterationsExceeded : public Error {
public:
    explicit MaxIterationsExceeded(const std::string& what) : Error(what) {}
};

class MaxSubdivisionsExceeded : public Error {
public:
    explicit MaxSubdivisionsExceeded(const std::string& what) : Error(what) {}
};

/// Catch-all for solver breakdowns that are not argument errors.
class NumericFailure : public Error {
public:
    explicit NumericFailure(const std::string& what) : Error(what) {}
};

/// The density mode sits on a support endpoint, so an equal-density
/// two-sided interval does not exist.
class ModeAtBoundary : public Error {
public:
    explicit ModeAtBoundary(const std::string& what) : Error(what) {}
};

/// The density is flat at the solution level; infinitely many intervals
/// achieve the requested coverage.
class NonUniqueHpd : public Error {
public:
    explicit NonUniqueHpd(const std::string& what) : Error(what) {}
};

/// A pushforward density failed the unimodality check.
class NonUnimodal : public Error {
public:
    explicit NonUnimodal(const std::string& what) : Error(what) {}
};

/// The MLE sits on a parameter-space bound, where the chi-square
/// calibration of the likelihood ratio does not hold.
class BoundaryMle : public Error {
public:
    explicit BoundaryMle(const std::string& what) : Error(what) {}
};

/// The likelihood cannot be normalized over the interest parameter.
class NonIntegrableLikelihood : public Error {
public:
    explicit NonIntegrableLikelihood(const std::string& what) : Error(what) {}
};

} // namespace intervalkit

#endif // INTERVALKIT_ERRORS_HPP
