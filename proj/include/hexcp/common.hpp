#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <cmath>

namespace hexcp {

// Extended-precision scalar for the kernel arithmetic.  The cross-ratio
// Cauchy problem amplifies roundoff by a constant factor per lattice shell,
// so 80-bit arithmetic buys roughly three extra decimal digits in every
// constructed pattern at no structural cost.
using Real = long double;
using Complex = std::complex<Real>;

inline constexpr Real kPi = 3.14159265358979323846264338327950288L;

inline Complex polar_r(Real r, Real theta) {
    return Complex(r * std::cos(theta), r * std::sin(theta));
}

inline Complex cis(Real theta) { return polar_r(1.0L, theta); }

// Primitive sixth/third roots of unity used throughout the lattice geometry.
inline const Complex kOmega = cis(2.0L * kPi / 3.0L);   // exp(2*pi*i/3)
inline const Complex kOmega2 = cis(-2.0L * kPi / 3.0L); // exp(-2*pi*i/3) == omega^2

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Numerically degenerate configuration (coincident points, singular step, ...).
struct SingularError : Error {
    explicit SingularError(const std::string& what) : Error(what) {}
};

// Data fails a consistency requirement (closure, constancy, concyclicity, ...).
struct InconsistentError : Error {
    explicit InconsistentError(const std::string& what) : Error(what) {}
};

inline Real sqr(Real x) { return x * x; }

} // namespace hexcp
