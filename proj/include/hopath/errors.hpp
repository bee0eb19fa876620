#pragma once

#include <stdexcept>
#include <string>

namespace hopath {

/// Base class of every exception raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad parameter, size mismatch).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The requested evaluation sits on or too close to a caustic, where the
/// pointwise kernel is a distribution. Callers should use the caustic module.
class CausticProximity : public Error {
public:
    using Error::Error;
};

/// The lattice is too coarse for the asymptotic eigenvalue counting to hold.
class StepsTooSmall : public Error {
public:
    StepsTooSmall(const std::string& what, std::size_t minimal_steps)
        : Error(what), minimal_steps_(minimal_steps) {}

    std::size_t minimal_steps() const noexcept { return minimal_steps_; }

private:
    std::size_t minimal_steps_;
};

/// A numerical procedure (quadrature, extrapolation, expansion) failed to
/// reach its tolerance. The message carries the diagnostics.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace hopath
