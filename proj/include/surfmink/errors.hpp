#pragma once

#include <stdexcept>
#include <string>

namespace surfmink {

// Base class for everything this library throws on purpose. Messages name the
// failing operation and the offending input so harness logs stay readable.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Geodesic shooting or another iterative solver ran out of iterations.
class NoConvergence : public Error {
public:
    using Error::Error;
};

// Two points are (numerically) connected by more than one minimizing geodesic.
class CutLocus : public Error {
public:
    using Error::Error;
};

// Requested an operation that needs a smooth chart on a triangle mesh backend.
class UnsupportedOnMesh : public Error {
public:
    using Error::Error;
};

// Curve parametrization has a (numerically) vanishing velocity somewhere.
class DegenerateVelocity : public Error {
public:
    using Error::Error;
};

// Fixed-step integration of the geodesic equation produced a non-finite state.
class StepFailure : public Error {
public:
    using Error::Error;
};

// Total turning of the polygon is too close to zero to normalize against.
class InadmissibleTotalAngle : public Error {
public:
    using Error::Error;
};

// Tangent-plane projection of a chord lost more than half its length.
class DegenerateProjection : public Error {
public:
    using Error::Error;
};

// Zero levelset crosses the mesh in more than one closed component.
class MultipleComponents : public Error {
public:
    using Error::Error;
};

// Levelset curve could not be closed into a loop (hit a boundary or a gap).
class OpenChain : public Error {
public:
    using Error::Error;
};

// Levelset field was evaluated too close to a pole of its angular chart.
class ChartSingularity : public Error {
public:
    using Error::Error;
};

// Mesh connectivity is not a closed 2-manifold.
class NonManifold : public Error {
public:
    using Error::Error;
};

// Malformed input file; message carries the line or row number.
class ParseError : public Error {
public:
    using Error::Error;
};

// Contour has fewer than three distinct points after deduplication.
class TooFewPoints : public Error {
public:
    using Error::Error;
};

// Enclosed area is not computable for this shape representation.
class W0Unavailable : public Error {
public:
    using Error::Error;
};

// Filesystem trouble (unreadable path, failed write).
class IoError : public Error {
public:
    using Error::Error;
};

// Bad command line or config value.
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace surfmink
