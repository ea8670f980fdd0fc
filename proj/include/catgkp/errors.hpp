#pragma once

#include <stdexcept>
#include <string>

namespace catgkp {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A state construction whose normalization vanishes (e.g. an odd cat at
// amplitude zero) or an operation that requires a non-null state.
struct DegenerateState : Error {
    using Error::Error;
};

// A mode index outside the state's mode range, or an operation applied to
// a repeated mode where distinct modes are required.
struct InvalidMode : Error {
    using Error::Error;
};

// Two states (or tensors) whose mode counts / cutoffs disagree.
struct ModeMismatch : Error {
    using Error::Error;
};

// Beam-splitter transmittance outside the open interval (0, 1).
struct InvalidTransmittance : Error {
    using Error::Error;
};

// A Fock-space truncation too small for the requested accuracy.
struct CutoffTooSmall : Error {
    using Error::Error;
};

// Normalizing a conditional state whose outcome density is numerically zero.
struct ZeroDensity : Error {
    using Error::Error;
};

// An operation defined only for single-mode states.
struct NotSingleMode : Error {
    using Error::Error;
};

// An acceptance window wider than the integration domain it lives in.
struct WindowExceedsDomain : Error {
    using Error::Error;
};

// An iterative numeric routine that failed to reach its tolerance.
struct ConvergenceFailure : Error {
    using Error::Error;
};

// A malformed circuit document.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace catgkp
