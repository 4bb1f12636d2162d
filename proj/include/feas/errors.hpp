#pragma once

#include <stdexcept>
#include <string>

namespace feas {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument outside a documented range (alpha, safety factor, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// A State violates a structural invariant (vacuum, non-finite values).
struct StateError : Error {
    using Error::Error;
};

/// Index outside the representable range (Littlewood-Paley block, axis).
struct RangeError : Error {
    using Error::Error;
};

/// The linear problem d1 u = Lambda^alpha rho has no periodic solution.
struct SolvabilityError : Error {
    using Error::Error;
};

/// Kernel evaluation requested at a lattice point.
struct SingularityError : Error {
    using Error::Error;
};

/// File format or filesystem failure.
struct IoError : Error {
    using Error::Error;
};

/// A numerical certification found a counterexample.
struct CertificationError : Error {
    using Error::Error;
};

/// Not enough records for a trajectory-level fit.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Non-finite value produced during time integration.
struct BlowUpError : Error {
    BlowUpError(const std::string& what, double t) : Error(what), time(t) {}
    double time;
};

} // namespace feas
