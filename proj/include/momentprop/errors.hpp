#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy for the moment propagation library.  Every failure mode that
// callers may want to distinguish gets its own type; the CLI maps each class
// to a distinct process exit code.

namespace momentprop {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments or an ill-formed model (non-positive shape parameters,
// non-affine trig arguments, unknown monomials, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A characteristic-function series failed to converge within its term cap.
class SeriesDivergence : public Error {
public:
    using Error::Error;
};

// A quantity that must be real came back with a non-negligible imaginary part.
class ResidueTooLarge : public Error {
public:
    using Error::Error;
};

// Symbolic expansion exceeded the configured term budget.
class TermBudgetExceeded : public Error {
public:
    using Error::Error;
};

// Two trig factors of the same symbol could not be brought to a common
// argument (non-integer scale ratio with powers that rule out product-to-sum).
class IncompatibleAtoms : public Error {
public:
    using Error::Error;
};

// An expression references a symbol with no binding (no distribution, no
// control value, not kept).
class UnboundSymbol : public Error {
public:
    using Error::Error;
};

// The functional basis kept growing past the iteration cap.
class ClosureDiverged : public Error {
public:
    using Error::Error;
};

// A moment basis would exceed the configured dimension cap.
class BasisTooLarge : public Error {
public:
    using Error::Error;
};

// A requested monomial is not part of the propagated basis.
class MonomialNotInBasis : public Error {
public:
    using Error::Error;
};

// Covariance factorization hit a negative pivot beyond tolerance.
class CholeskyFailure : public Error {
public:
    using Error::Error;
};

// Scenario or expression text could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

// Filesystem trouble (unreadable scenario file, failed atomic write, ...).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace momentprop
