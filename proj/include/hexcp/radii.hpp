#pragma once

#include <hexcp/circle.hpp>
#include <hexcp/pattern.hpp>

#include <map>
#include <queue>

namespace hexcp {

// Positive radii on the center sublattice k+l+m = 0.
using RadiusFunction = std::map<LatticeIndex, Real>;

// Angle defect of one flower: arg prod_n (1 + e^{i alpha_n} R_n)
// (e^{-i alpha_n} + R_{n+3}), R = petal radius / center radius.  Zero iff the
// flower closes up.
inline Real flower_residual(const RadiusFunction& r, const LatticeIndex& center,
                            const AngleTriple& angles) {
    auto radius_at = [&](const LatticeIndex& p) {
        auto it = r.find(p);
        if (it == r.end()) throw DomainError("flower_residual: missing petal radius");
        return it->second;
    };
    Real rc = radius_at(center);
    Complex prod(1.0);
    for (int n = 1; n <= 3; ++n) {
        Real rp = radius_at(center + angle_pair_direction(n)) / rc;
        Real rm = radius_at(center - angle_pair_direction(n)) / rc;
        Complex e = cis(angles[n]);
        prod *= (1.0L + e * rp) * (std::conj(e) + rm);
    }
    return std::abs(std::arg(prod));
}

inline RadiusFunction dual_radii(const RadiusFunction& r) {
    RadiusFunction out;
    for (const auto& [p, v] : r) out[p] = 1.0L / v;
    return out;
}

// Log-linear Doyle radii r(k,l,m) = exp(u k + v l - (u+v) m) on the center
// sublattice; satisfies R_k R_{k+3} = R^2 and R_k R_{k+2} R_{k+4} = R^3 on
// every flower, for the two free parameters of the packing.
inline RadiusFunction doyle_radii(Real u, Real v, int n) {
    RadiusFunction out;
    Region reg{RegionKind::StripBox, n};
    for (const LatticeIndex& p : reg.points())
        if (sublattice_class(p) == 0) out[p] = std::exp(u * p.k + v * p.l - (u + v) * p.m);
    return out;
}

// Distance of adjacent centers when the circles of radii r1, r2 intersect at
// angle alpha (alpha = 0 is tangency, d = r1 + r2).
inline Real center_distance(Real r1, Real r2, Real alpha) {
    return std::sqrt(r1 * r1 + r2 * r2 + 2.0L * r1 * r2 * std::cos(alpha));
}

namespace detail {

inline int petal_step_angle_class(const LatticeIndex& d) {
    for (int n = 1; n <= 3; ++n) {
        LatticeIndex a = angle_pair_direction(n);
        if ((d == a) || (d == -a)) return n;
    }
    throw DomainError("petal_step_angle_class: not a petal step");
}

// Both intersection points of two circles; throws when disjoint or nested.
inline std::pair<Complex, Complex> circle_intersections(Complex c1, Real r1, Complex c2,
                                                        Real r2) {
    Complex d = c2 - c1;
    Real L = std::abs(d);
    if (L < 1e-14L) throw SingularError("circle_intersections: concentric circles");
    Real x = (L * L + r1 * r1 - r2 * r2) / (2.0L * L);
    Real h2 = r1 * r1 - x * x;
    if (h2 < -1e-9L * r1 * r1)
        throw SingularError("circle_intersections: circles do not intersect");
    Real h = std::sqrt(std::max(h2, (Real)0.0L));
    Complex u = d / L;
    Complex mid = c1 + x * u;
    Complex off = Complex(0.0, 1.0) * u * h;
    return {mid + off, mid - off};
}

} // namespace detail

// Lays a radius function out in the plane: circle centers by triangulation
// (first circle at the origin, first neighbor on the positive real axis),
// intersection points from circle pairs, sides disambiguated so the layout
// has the lattice's counterclockwise orientation.  Requires the flower
// residual < 1e-8 on all interior flowers.
inline PatternMap layout_from_radii(const RadiusFunction& r, const AngleTriple& angles, int n) {
    Region strip{RegionKind::StripBox, n};
    for (const auto& [c, rc] : r) {
        (void)rc;
        bool interior = true;
        for (int i = 0; i < 6 && interior; ++i)
            if (!r.count(c + petal_directions()[i])) interior = false;
        if (interior && flower_residual(r, c, angles) > 1e-8L)
            throw InconsistentError("layout_from_radii: flower residual exceeds 1e-8");
    }

    PatternMap pat;
    pat.region = strip;
    pat.deltas = angles_to_deltas(angles);
    pat.meta.variant = "layout";
    pat.meta.angles = angles;

    auto radius_at = [&](const LatticeIndex& p) {
        auto it = r.find(p);
        if (it == r.end()) throw DomainError("layout_from_radii: missing radius");
        return it->second;
    };
    auto dist = [&](const LatticeIndex& a, const LatticeIndex& b) {
        int cls = detail::petal_step_angle_class(b - a);
        return center_distance(radius_at(a), radius_at(b), angles[cls]);
    };

    // Center placement.
    std::map<LatticeIndex, Complex> pos;
    LatticeIndex origin{0, 0, 0};
    if (!r.count(origin)) throw DomainError("layout_from_radii: radii must cover the origin");
    pos[origin] = Complex(0.0);
    LatticeIndex first = origin + petal_directions()[0];
    if (r.count(first)) pos[first] = Complex(dist(origin, first));

    auto lattice_cross_sign = [&](const LatticeIndex& a, const LatticeIndex& b,
                                  const LatticeIndex& c) {
        Complex u = embed_reference(b) - embed_reference(a);
        Complex v = embed_reference(c) - embed_reference(a);
        return std::imag(std::conj(u) * v) > 0.0L ? 1.0L : -1.0L;
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& [c, rc] : r) {
            (void)rc;
            if (pos.count(c)) continue;
            // Two placed, mutually adjacent neighbors determine the triangle.
            for (int i = 0; i < 6; ++i) {
                LatticeIndex a = c + petal_directions()[i];
                LatticeIndex b = c + petal_directions()[(i + 1) % 6];
                if (!pos.count(a) || !pos.count(b)) continue;
                auto [p1, p2] = detail::circle_intersections(pos[a], dist(a, c), pos[b], dist(b, c));
                Real want = lattice_cross_sign(a, b, c);
                Complex u = pos[b] - pos[a];
                Complex cand = (std::imag(std::conj(u) * (p1 - pos[a])) > 0.0L ? 1.0L : -1.0L) == want
                                   ? p1
                                   : p2;
                pos[c] = cand;
                progress = true;
                break;
            }
        }
    }
    if (pos.size() != r.size())
        throw InconsistentError("layout_from_radii: radii domain is not flower-connected");

    for (const auto& [c, z] : pos) pat.values[c] = CPoint(z);

    // Intersection points: vertices of the strip adjacent to two (or three)
    // placed centers.  Of the two circle-circle intersections take the one on
    // the lattice side of the center line.
    for (const LatticeIndex& v : strip.points()) {
        int s = sublattice_class(v);
        if (s == 0) continue;
        std::vector<LatticeIndex> adj;
        for (int f = 1; f <= 3; ++f) {
            LatticeIndex c = s > 0 ? v - unit_step(f) : v + unit_step(f);
            if (pos.count(c)) adj.push_back(c);
        }
        if (adj.size() < 2) continue;
        auto [p1, p2] =
            detail::circle_intersections(pos[adj[0]], radius_at(adj[0]), pos[adj[1]], radius_at(adj[1]));
        Real want = lattice_cross_sign(adj[0], adj[1], v);
        Complex u = pos[adj[1]] - pos[adj[0]];
        Complex cand =
            (std::imag(std::conj(u) * (p1 - pos[adj[0]])) > 0.0L ? 1.0L : -1.0L) == want ? p1 : p2;
        if (adj.size() == 3) {
            Real err = std::abs(std::abs(cand - pos[adj[2]]) - radius_at(adj[2]));
            Real other = std::abs(std::abs((cand == p1 ? p2 : p1) - pos[adj[2]]) - radius_at(adj[2]));
            if (other < err) cand = (cand == p1 ? p2 : p1); // third circle arbitrates
        }
        pat.values[v] = CPoint(cand);
    }
    return pat;
}

// Spread of the neighbor distances around an even-sublattice vertex; zero
// for a kite pattern (the neighbors lie on a circle centered there).
inline std::optional<Real> kite_residual(const PatternMap& pat, const LatticeIndex& p) {
    if (sublattice_class(p) % 2 != 0 || !pat.has_finite(p)) return std::nullopt;
    std::vector<Real> d;
    for (int f = 1; f <= 3; ++f)
        for (int sign : {+1, -1}) {
            LatticeIndex q = p + unit_step(f) * sign;
            if (!pat.has_finite(q)) return std::nullopt;
            d.push_back(std::abs(pat.value(q) - pat.value(p)));
        }
    return *std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end());
}

// Radii read back from a kite pattern: the distance of an even-sublattice
// vertex to its neighbors, which must agree to 1e-7.
inline RadiusFunction radii_from_pattern(const PatternMap& pat, Real tol = 1e-7L) {
    RadiusFunction out;
    for (const auto& [p, v] : pat.values) {
        if (sublattice_class(p) % 2 != 0 || v.is_infinite()) continue;
        std::vector<Real> d;
        for (int f = 1; f <= 3; ++f)
            for (int sign : {+1, -1}) {
                LatticeIndex q = p + unit_step(f) * sign;
                if (pat.has_finite(q)) d.push_back(std::abs(pat.value(q) - v.value()));
            }
        if (d.size() < 3) continue;
        Real lo = *std::min_element(d.begin(), d.end());
        Real hi = *std::max_element(d.begin(), d.end());
        if (hi - lo > tol * std::max((Real)1.0L, hi))
            throw InconsistentError("radii_from_pattern: neighbor distances disagree; not a kite pattern");
        out[p] = 0.5L * (lo + hi);
    }
    return out;
}

} // namespace hexcp
