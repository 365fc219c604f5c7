#pragma once

#include <stdexcept>
#include <string>

namespace obliq {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sample has fewer than three points or contains non-finite values.
struct DegenerateSample : Error {
    using Error::Error;
};

// Summary statistics violate a precondition (Sxx = 0, Syy = 0, Sxy = 0, ...).
struct DegenerateStats : Error {
    using Error::Error;
};

// A slope of zero where the formula divides by beta1.
struct InvalidSlope : Error {
    using Error::Error;
};

// Bracketed iteration failed to reach tolerance within the cap.
struct NoConvergence : Error {
    using Error::Error;
};

// Argument falls outside the admissible interval or domain.
struct OutOfRange : Error {
    using Error::Error;
};

// Sxy = 0: the horizontal OLS slope Syy/Sxy is undefined.
struct HorizontalUndefined : Error {
    using Error::Error;
};

// Sxy = 0: the sign convention of a square-root estimator cannot be resolved.
struct SignAmbiguous : Error {
    using Error::Error;
};

// Fourth-moment slope: Sxxxy - 3*Sxy*Sxx = 0.
struct DenominatorZero : Error {
    using Error::Error;
};

// rho = 0: the maximum likelihood slope formula divides by rho.
struct RhoZero : Error {
    using Error::Error;
};

}  // namespace obliq
