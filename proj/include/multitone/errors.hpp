#pragma once

#include <stdexcept>
#include <string>

namespace multitone {

// Invalid scenario / configuration input.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base class for singularities and degeneracies hit during computation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two components (or a source and a target location) sit on the same
// fractional bin, making the leakage quotient singular.
class CoincidentFrequencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// The two interpolation coefficients are exactly equal.
class DegenerateInterpolationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Two coarse peaks landed on the same bin.
class UnresolvableComponentsError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace multitone
