#pragma once

#include <stdexcept>
#include <string>

namespace wavechain {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation hit a denominator root (or a numerically indistinguishable point).
struct PoleHit : Error {
    using Error::Error;
};

// Operation requires deg(num) <= deg(den).
struct ImproperTf : Error {
    using Error::Error;
};

// alpha(s) = 2 + 1/M(s) is undefined where M vanishes.
struct ZeroOfM : Error {
    using Error::Error;
};

// Integrand does not vanish towards the edge of the inversion grid.
struct NonDecayingIntegrand : Error {
    using Error::Error;
};

// Impulse-response tail energy exceeds the configured truncation bound.
struct TruncationTooCoarse : Error {
    using Error::Error;
};

struct SingularDenominator : Error {
    using Error::Error;
};

// DC-gain formulas require at least one integrator in each open loop.
struct NoIntegrator : Error {
    using Error::Error;
};

// Closed-form chain responses exist only for specific absorber layouts.
struct UnsupportedTopology : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

}  // namespace wavechain
