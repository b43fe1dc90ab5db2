#pragma once

#include <hexcp/common.hpp>

#include <array>

namespace hexcp {

// Intersection angles of the three edge classes; alpha1+alpha2+alpha3 = pi,
// each angle in the open interval (0, pi).  The degenerate Schramm limit
// alpha_n = 0 is rejected.
struct AngleTriple {
    Real a1, a2, a3;

    AngleTriple(Real alpha1, Real alpha2, Real alpha3) : a1(alpha1), a2(alpha2), a3(alpha3) {
        if (!(a1 > 0.0L && a1 < kPi && a2 > 0.0L && a2 < kPi && a3 > 0.0L && a3 < kPi))
            throw DomainError("AngleTriple: angles must lie in (0, pi)");
        if (std::abs(a1 + a2 + a3 - kPi) > 1e-12L)
            throw DomainError("AngleTriple: angles must sum to pi");
    }

    // alpha3 inferred from the sum constraint.
    AngleTriple(Real alpha1, Real alpha2) : AngleTriple(alpha1, alpha2, kPi - alpha1 - alpha2) {}

    static AngleTriple isotropic() { return AngleTriple(kPi / 3.0L, kPi / 3.0L, kPi / 3.0L); }

    Real operator[](int n) const {
        switch (n) {
            case 1: return a1;
            case 2: return a2;
            case 3: return a3;
            default: throw DomainError("AngleTriple: index must be 1..3");
        }
    }
};

// The three edge constants Delta_1, Delta_2, Delta_3 of the cross-ratio
// system.  Circle patterns carry unitary triples (up to a common scalar,
// which only rescales the dual); general complex triples occur for the
// non-circle solutions (z^3 uses (-3, -3 omega^2, -3 omega)).
struct DeltaTriple {
    Complex d1{1.0}, d2{1.0}, d3{1.0};

    DeltaTriple() = default;
    DeltaTriple(Complex a, Complex b, Complex c) : d1(a), d2(b), d3(c) {
        if (d1 == Complex(0.0) || d2 == Complex(0.0) || d3 == Complex(0.0))
            throw DomainError("DeltaTriple: entries must be nonzero");
    }

    Complex operator[](int n) const {
        switch (((n - 1) % 3 + 3) % 3) {
            case 0: return d1;
            case 1: return d2;
            default: return d3;
        }
    }
};

// Delta_n = exp(-i delta_n) with 2 alpha_n = delta_{n+2} - delta_{n+1}
// (mod 2 pi), gauge fixed by delta_1 = 0, delta_2 = 2 alpha_3,
// delta_3 = -2 alpha_2.  Then Delta_{n+1}/Delta_{n+2} = exp(2 i alpha_n).
inline DeltaTriple angles_to_deltas(const AngleTriple& a) {
    Real delta1 = 0.0L;
    Real delta2 = 2.0L * a.a3;
    Real delta3 = -2.0L * a.a2;
    return DeltaTriple(cis(-delta1), cis(-delta2), cis(-delta3));
}

// Cross-ratio target of an elementary quadrilateral traversed as
// [p, p+u, p+u+v, p+v] where u is a +-E_{fam_u} step and v a +-E_{fam_v}
// step: the target is Delta_{fam_u} / Delta_{fam_v}, independent of the step
// signs.  The three reference orientations are (1,3), (3,2), (2,1).
inline Complex quad_target(const DeltaTriple& d, int fam_u, int fam_v) {
    if (fam_u == fam_v) throw DomainError("quad_target: families must differ");
    return d[fam_u] / d[fam_v];
}

} // namespace hexcp
