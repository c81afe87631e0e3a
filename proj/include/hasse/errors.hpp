#pragma once

#include <stdexcept>
#include <string>

namespace hasse {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments: modulus < 2, composite where a prime is required,
// values outside the exact 64-bit range, zero coefficients, ...
struct InvalidInput : Error {
    using Error::Error;
};

// gcd(a, m) > 1 in inverse_mod.
struct NoInverse : Error {
    using Error::Error;
};

// A mathematical precondition does not hold (e.g. N is not an r-th power
// modulo p, or N != 1 mod 16 for the 2-adic fourth-power lift).
struct PreconditionFailed : Error {
    using Error::Error;
};

// An internal algebraic identity failed to verify.  Reaching this means a
// bug in the library, never bad user input.
struct IdentityCheckFailed : Error {
    using Error::Error;
};

// The base solution handed to a lifting routine is not strong.
struct NotStrong : Error {
    using Error::Error;
};

// Hensel lifting requires f'(t0) != 0 mod p.
struct DerivativeVanishes : Error {
    using Error::Error;
};

// No root modulo p exists, so there is nothing to lift.
struct RootSearchFailed : Error {
    using Error::Error;
};

// The quartic image of a solution cannot be made primitive (p^2 | d).
struct NoPrimitiveImage : Error {
    using Error::Error;
};

// An enumeration or factorization would exceed the configured budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

}  // namespace hasse
