#pragma once

#include <stdexcept>
#include <string>

namespace npcure {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No covariate mass inside the kernel window at the requested point.
struct EmptyNeighborhood : Error {
    EmptyNeighborhood(double x, double h)
        : Error("empty kernel neighborhood at x=" + std::to_string(x) +
                " with bandwidth h=" + std::to_string(h)),
          center(x), bandwidth(h) {}
    double center;
    double bandwidth;
};

// Estimated uncured probability is (numerically) zero; latency undefined.
struct CuredSlice : Error {
    explicit CuredSlice(double x)
        : Error("estimated uncured probability is zero at x=" + std::to_string(x)),
          center(x) {}
    double center;
};

struct DegenerateCovariate : Error {
    using Error::Error;
};

struct GridTooSmall : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct QuadratureFailure : Error {
    using Error::Error;
};

// |mu(x)| below tolerance: the asymptotically optimal bandwidth is unbounded.
struct DegenerateCurvature : Error {
    explicit DegenerateCurvature(double x)
        : Error("curvature term vanishes at x=" + std::to_string(x) +
                "; optimal bandwidth is unbounded"),
          center(x) {}
    double center;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace npcure
