#pragma once

#include <hexcp/common.hpp>

#include <algorithm>
#include <array>

namespace hexcp {

// Point of the Riemann sphere in homogeneous coordinates: the point is a/b,
// with b == 0 encoding infinity.  (a,b) and any nonzero rescaling represent
// the same point; equality is projective.
struct CPoint {
    Complex a{0.0, 0.0};
    Complex b{1.0, 0.0};

    CPoint() = default;
    CPoint(Complex value) : a(value), b(1.0) {}                 // NOLINT: implicit by design
    CPoint(Real value) : a(value), b(1.0) {}                     // NOLINT
    CPoint(Complex num, Complex den) : a(num), b(den) { normalize(); }

    static CPoint infinity() { return CPoint(Complex(1.0), Complex(0.0)); }

    bool is_infinite() const { return b == Complex(0.0); }

    // Finite value; throws on the point at infinity.
    Complex value() const {
        if (is_infinite()) throw DomainError("CPoint::value: point at infinity");
        return a / b;
    }

    // Rescale the representative to max component magnitude 1.  Keeps long
    // propagations away from overflow/underflow.
    void normalize() {
        Real s = std::max(std::abs(a), std::abs(b));
        if (s == 0.0) throw DomainError("CPoint: (0,0) is not a point");
        a /= s;
        b /= s;
        if (std::abs(b) < 1e-60L) b = 0.0;
    }
};

// a_i*b_j - a_j*b_i; vanishes iff the two points coincide projectively.
inline Complex pdet(const CPoint& p, const CPoint& q) { return p.a * q.b - q.a * p.b; }

// Chordal distance on the Riemann sphere, range [0,2].
inline Real chordal(const CPoint& p, const CPoint& q) {
    Real np = std::sqrt(std::norm(p.a) + std::norm(p.b));
    Real nq = std::sqrt(std::norm(q.a) + std::norm(q.b));
    return 2.0L * std::abs(pdet(p, q)) / (np * nq);
}

inline bool projectively_equal(const CPoint& p, const CPoint& q, Real tol = 1e-12L) {
    return chordal(p, q) <= tol;
}

// Reciprocal is exact in homogeneous coordinates (0 <-> infinity).
inline CPoint reciprocal(const CPoint& p) { return CPoint(p.b, p.a); }

// q(z1,z2,z3,z4) = (z2-z1)(z4-z3) / ((z3-z2)(z1-z4)), computed via 2x2
// determinants so that points at infinity are exact.
inline CPoint cross_ratio(const CPoint& z1, const CPoint& z2, const CPoint& z3, const CPoint& z4) {
    Complex num = pdet(z2, z1) * pdet(z4, z3);
    Complex den = pdet(z3, z2) * pdet(z1, z4);
    if (num == Complex(0.0) && den == Complex(0.0))
        throw DomainError("cross_ratio: degenerate quadruple");
    return CPoint(num, den);
}

namespace detail {

// Unique z4 with cross_ratio(z1,z2,z3,z4) = q.  Linear solve in homogeneous
// coordinates: q_a*d32*(a1*b4 - a4*b1) = q_b*d21*(a4*b3 - a3*b4).
inline CPoint fourth_point_slot4(const CPoint& q, const CPoint& z1, const CPoint& z2,
                                 const CPoint& z3) {
    Complex d32 = pdet(z3, z2);
    Complex d21 = pdet(z2, z1);
    Complex a4 = q.a * d32 * z1.a + q.b * d21 * z3.a;
    Complex b4 = q.a * d32 * z1.b + q.b * d21 * z3.b;
    if (a4 == Complex(0.0) && b4 == Complex(0.0))
        throw DomainError("fourth_point: degenerate configuration");
    return CPoint(a4, b4);
}

} // namespace detail

// Completes a quadruple with prescribed cross-ratio.  `slot` (1..4) names the
// unknown argument; the three known points are passed in argument order with
// the unknown omitted, i.e. slot=2 takes (z1,z3,z4).
inline CPoint fourth_point(const CPoint& q, const CPoint& p, const CPoint& r, const CPoint& s,
                           int slot = 4) {
    switch (slot) {
        case 4: return detail::fourth_point_slot4(q, p, r, s);            // (z1,z2,z3,.)
        case 3: return detail::fourth_point_slot4(q, r, p, s);            // q(z2,z1,z4,z3)=q
        case 2: return detail::fourth_point_slot4(q, r, s, p);            // q(z3,z4,z1,z2)=q
        case 1: return detail::fourth_point_slot4(q, s, r, p);            // q(z4,z3,z2,z1)=q
        default: throw DomainError("fourth_point: slot must be 1..4");
    }
}

// m(z1,...,z6) = (z1-z2)(z3-z4)(z5-z6) / ((z2-z3)(z4-z5)(z6-z1)).
inline CPoint multi_ratio(const std::array<CPoint, 6>& z) {
    Complex num = pdet(z[0], z[1]) * pdet(z[2], z[3]) * pdet(z[4], z[5]);
    Complex den = pdet(z[1], z[2]) * pdet(z[3], z[4]) * pdet(z[5], z[0]);
    if (num == Complex(0.0) && den == Complex(0.0))
        throw DomainError("multi_ratio: degenerate sextuple");
    return CPoint(num, den);
}

} // namespace hexcp
