#pragma once

#include <hexcp/cpoint.hpp>
#include <hexcp/mat2.hpp>

#include <array>

namespace hexcp {

// Fractional-linear transformation z -> (az+b)/(cz+d), acting on homogeneous
// coordinates by matrix-vector product.  Composition is matrix product.
struct Mobius {
    Mat2 m;

    Mobius() = default;
    explicit Mobius(Mat2 mat) : m(mat) {
        if (m.det() == Complex(0.0)) throw DomainError("Mobius: singular matrix");
    }
    Mobius(Complex a, Complex b, Complex c, Complex d) : Mobius(Mat2{a, b, c, d}) {}

    static Mobius identity() { return Mobius(); }

    CPoint apply(const CPoint& p) const {
        return CPoint(m.m00 * p.a + m.m01 * p.b, m.m10 * p.a + m.m11 * p.b);
    }

    Mobius inverse() const { return Mobius(m.adj()); }
    Mobius operator*(const Mobius& o) const { return Mobius(m * o.m); }
};

namespace detail {

// Matrix sending (p, q, r) to (0, 1, infinity) projectively.
inline Mat2 to_zero_one_inf(const CPoint& p, const CPoint& q, const CPoint& r) {
    Complex dqr = pdet(q, r);
    Complex dqp = pdet(q, p);
    if (dqr == Complex(0.0) || dqp == Complex(0.0) || pdet(p, r) == Complex(0.0))
        throw DomainError("mobius_from_pairs: coincident points in a triple");
    return Mat2{dqr * p.b, -dqr * p.a, dqp * r.b, -dqp * r.a};
}

} // namespace detail

// The unique Mobius map (up to scale) with src[i] -> dst[i].
inline Mobius mobius_from_pairs(const std::array<CPoint, 3>& src, const std::array<CPoint, 3>& dst) {
    Mat2 a = detail::to_zero_one_inf(src[0], src[1], src[2]);
    Mat2 b = detail::to_zero_one_inf(dst[0], dst[1], dst[2]);
    return Mobius(b.adj() * a);
}

} // namespace hexcp
