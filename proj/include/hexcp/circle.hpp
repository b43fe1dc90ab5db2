#pragma once

#include <hexcp/cpoint.hpp>

namespace hexcp {

// Circle in the plane, or a line (the image of a circle through infinity).
// Line representation: { z : Re(conj(normal) * z) = offset }, |normal| = 1.
struct Circle {
    bool is_line = false;
    Complex center{0.0};
    Real radius = 0.0;
    Complex normal{1.0};
    Real offset = 0.0;

    static Circle proper(Complex c, Real r) {
        if (!(r > 0.0)) throw DomainError("Circle: radius must be positive");
        Circle out;
        out.center = c;
        out.radius = r;
        return out;
    }

    static Circle line(Complex n, Real d) {
        Circle out;
        out.is_line = true;
        Real s = std::abs(n);
        if (s == 0.0) throw DomainError("Circle::line: zero normal");
        n /= s;
        d /= s;
        if (d < 0.0 || (d == 0.0 && (n.real() < 0.0 || (n.real() == 0.0 && n.imag() < 0.0)))) {
            n = -n;
            d = -d;
        }
        out.normal = n;
        out.offset = d;
        return out;
    }
};

// Unique circle (or line) through three distinct points of the sphere.
inline Circle circumcircle(const CPoint& z1, const CPoint& z2, const CPoint& z3) {
    if (pdet(z1, z2) == Complex(0.0) || pdet(z2, z3) == Complex(0.0) ||
        pdet(z1, z3) == Complex(0.0))
        throw DomainError("circumcircle: coincident points");

    auto line_through = [](Complex a, Complex b) {
        Complex u = b - a;
        Complex n = Complex(0.0, 1.0) * (u / std::abs(u));
        return Circle::line(n, std::real(std::conj(n) * a));
    };

    if (z1.is_infinite()) return line_through(z2.value(), z3.value());
    if (z2.is_infinite()) return line_through(z1.value(), z3.value());
    if (z3.is_infinite()) return line_through(z1.value(), z2.value());

    Complex a = z1.value(), b = z2.value(), c = z3.value();
    Complex den = std::conj(a) * (b - c) + std::conj(b) * (c - a) + std::conj(c) * (a - b);
    Real scale = std::max({std::abs(a - b), std::abs(b - c), std::abs(c - a)});
    if (std::abs(den) < 1e-13L * scale * scale) return line_through(a, b);
    Complex num =
        std::norm(a) * (b - c) + std::norm(b) * (c - a) + std::norm(c) * (a - b);
    Complex center = num / den;
    return Circle::proper(center, std::abs(a - center));
}

// Inversive reflection.  For a proper circle: z -> c + r^2 / conj(z - c),
// infinity -> center, center -> infinity.  Lines reflect Euclideanly and fix
// infinity.
inline CPoint reflect_in_circle(const CPoint& p, const Circle& c) {
    if (c.is_line) {
        if (p.is_infinite()) return p;
        Complex a0 = c.offset * c.normal;
        Complex u = Complex(0.0, 1.0) * c.normal;
        return CPoint(a0 + u * u * std::conj(p.value() - a0));
    }
    if (p.is_infinite()) return CPoint(c.center);
    Complex d = p.value() - c.center;
    if (d == Complex(0.0)) return CPoint::infinity();
    return CPoint(c.center + sqr(c.radius) / std::conj(d));
}

} // namespace hexcp
