#pragma once

#include <stdexcept>
#include <string>

namespace micz {

// Distance from a chart boundary (or the origin, for twisted brackets) below
// which evaluation refuses to proceed instead of returning non-finite values.
inline constexpr double kBoundaryMargin = 1e-12;

// Violated domain constraint (chart boundary, wrong curvature, non-finite input).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// |q| ~ 0 under a monopole-twisted structure, z = 0 in the KS map, etc.
struct SingularityError : DomainError {
    explicit SingularityError(const std::string& what) : DomainError(what) {}
};

// Coordinate degeneracy (undefined angle, singular chart Jacobian).
struct DegeneracyError : DomainError {
    explicit DegeneracyError(const std::string& what) : DomainError(what) {}
};

// Caller violated an operation contract (e.g. off-shell energy handed to the
// separation-constant extractor).
struct ContractError : std::logic_error {
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// A bilinear that must be real came back with a large imaginary residue;
// indicates an implementation defect, so evaluation aborts.
struct RealityError : std::logic_error {
    explicit RealityError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace micz
