#pragma once

#include <stdexcept>
#include <string>

namespace bikelab {

// Base class for all bikelab errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A polygon side collapsed below the degeneracy threshold.
struct DegenerateSide : Error {
    using Error::Error;
};

// Operation requires an odd number of vertices.
struct EvenGon : Error {
    using Error::Error;
};

// Operation requires an even number of vertices.
struct OddGon : Error {
    using Error::Error;
};

// The frame length violates 2t < min side, so the one-sided inverse is undefined.
struct FrameTooLong : Error {
    using Error::Error;
};

// An iterative solver ran out of iterations.
struct NoConvergence : Error {
    using Error::Error;
};

// Newton hit a numerically singular Jacobian.
struct SingularJacobian : Error {
    using Error::Error;
};

// Cross-ratio denominator vanished (a = b or b = d).
struct DegenerateQuadruple : Error {
    using Error::Error;
};

// A short diagonal S_{i+1} - S_{i-1} of a parent polygon vanished.
struct DegenerateDiagonal : Error {
    using Error::Error;
};

// Tangent-vector dimensions do not match the polygon space.
struct DimensionMismatch : Error {
    using Error::Error;
};

// A closed-form side/area formula produced an impossible value.
struct InvalidResult : Error {
    using Error::Error;
};

// Triangle with (near-)collinear vertices where angles are required.
struct DegenerateTriangle : Error {
    using Error::Error;
};

// A conic/incidence construction lost rank (parallel lines, coincident points).
struct DegenerateConfiguration : Error {
    using Error::Error;
};

// A Newton root that fails its dynamical verification.
struct SpuriousRoot : Error {
    using Error::Error;
};

// Figure emission was asked to plot nothing.
struct EmptyInput : Error {
    using Error::Error;
};

// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace bikelab
