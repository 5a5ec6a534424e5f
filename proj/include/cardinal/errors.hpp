#ifndef CARDINAL_ERRORS_HPP
#define CARDINAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cardinal {

// Accuracy budget exhausted; carries the accuracy actually achieved.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// Truncation cap hit before the requested tolerance was reached.
class TruncationError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

// A summation route cannot be used for the given parameters (e.g. the
// spatial symbol sum at very small h); the caller should switch routes.
class RouteInfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Aliasing control failed: the coefficient grid cap was reached.
class AliasingError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

// A symbol grid violates its positivity invariant.
class CorruptedGridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfWindowError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class IllPosedInterpolationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cardinal

#endif
