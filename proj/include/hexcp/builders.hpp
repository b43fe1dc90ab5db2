#pragma once

#include <hexcp/pattern.hpp>

#include <optional>

namespace hexcp {

// Coefficients of the non-autonomous constraint
//   b z^2 + c z + d = sum_n 2 (coord_n - a_n) * (z_next - z)(z - z_prev)/(z_next - z_prev).
// The z^c family has b = d = a1 = a2 = a3 = 0 and real c in (0,2]; the
// log z pattern satisfies the constraint with b = c = 0, d = 1.
struct ConstraintParams {
    Complex b{0.0}, c{0.0}, d{0.0};
    Complex a1{0.0}, a2{0.0}, a3{0.0};

    static ConstraintParams power(Complex c) { return ConstraintParams{0.0, c, 0.0, 0.0, 0.0, 0.0}; }
    static ConstraintParams logarithm() { return ConstraintParams{0.0, 0.0, 1.0, 0.0, 0.0, 0.0}; }
};

// |LHS - RHS| of the constraint at p, or nullopt when some axis neighbor is
// missing or infinite (boundary, or the log pattern's origin).
inline std::optional<Real> constraint_residual(const PatternMap& pat, const ConstraintParams& par,
                                               const LatticeIndex& p) {
    if (!pat.has_finite(p)) return std::nullopt;
    std::array<Complex, 3> term;
    std::array<Complex, 3> coeff = {Complex(Real(p.k)) - par.a1, Complex(Real(p.l)) - par.a2,
                                    Complex(Real(p.m)) - par.a3};
    Complex z = pat.value(p);
    for (int n = 1; n <= 3; ++n) {
        LatticeIndex up = p + unit_step(n);
        LatticeIndex dn = p - unit_step(n);
        if (!pat.has_finite(up) || !pat.has_finite(dn)) return std::nullopt;
        Complex znext = pat.value(up), zprev = pat.value(dn);
        Complex den = znext - zprev;
        Real scale = std::abs(znext) + std::abs(zprev) + std::abs(z);
        if (std::abs(den) < 1e-13L * std::max(scale, (Real)1.0L)) return std::nullopt;
        term[n - 1] = (znext - z) * (z - zprev) / den;
    }
    Complex lhs = par.b * z * z + par.c * z + par.d;
    Complex rhs = 2.0L * (coeff[0] * term[0] + coeff[1] * term[1] + coeff[2] * term[2]);
    return std::abs(lhs - rhs);
}

// One-axis specialization c z_k = 2k (z_{k+1}-z_k)(z_k-z_{k-1})/(z_{k+1}-z_{k-1});
// returns the unique z_{k+1}.  The same recurrence holds on every coordinate
// ray with k the step count from the origin (the direction sign cancels).
inline Complex axis_step(Complex zprev, Complex zcur, int k, Complex c) {
    if (zprev == zcur) throw DomainError("axis_step: zprev must differ from zcur");
    Complex a = zcur - zprev;
    Complex den = c * zcur - 2.0L * Real(k) * a;
    Real scale = std::max({std::abs(zcur), std::abs(a) * Real(k), (Real)1e-30L});
    if (std::abs(den) < 1e-12L * scale)
        throw SingularError("axis_step: singular step (for c = 2 use the z^2 builder)");
    return zcur * (c * zprev - 2.0L * Real(k) * a) / den;
}

namespace detail {

// Axis step of the log constraint 2k (z_{k+1}-z_k)(z_k-z_{k-1})/(z_{k+1}-z_{k-1}) = 1
// with the previous point possibly at infinity.
inline CPoint log_axis_step(const CPoint& zprev, const CPoint& zcur, int k) {
    Complex z = zcur.value();
    if (zprev.is_infinite()) return CPoint(z + 1.0L / (2.0L * Real(k)));
    Complex a = z - zprev.value();
    Complex den = 2.0L * Real(k) * a - 1.0L;
    if (std::abs(den) < 1e-13L) throw SingularError("log axis step: singular step");
    return CPoint((2.0L * Real(k) * z * a - zprev.value()) / den);
}

// Fills one coordinate ray by the z^c axis recurrence.  `dir` is a +-unit
// step; values at 0..start*dir must already be present.
inline void fill_axis_zc(PatternMap& pat, const LatticeIndex& dir, Complex c, int start = 1) {
    for (int t = start; t < pat.region.n; ++t) {
        LatticeIndex cur = dir * t;
        LatticeIndex nxt = dir * (t + 1);
        if (!pat.region.contains(nxt)) break;
        if (pat.has(nxt)) continue;
        Complex zprev = pat.value(dir * (t - 1));
        Complex zcur = pat.value(cur);
        pat.values[nxt] = CPoint(axis_step(zprev, zcur, t, c));
    }
}

inline void fill_axis_log(PatternMap& pat, const LatticeIndex& dir, int start = 1) {
    for (int t = start; t < pat.region.n; ++t) {
        LatticeIndex nxt = dir * (t + 1);
        if (!pat.region.contains(nxt)) break;
        if (pat.has(nxt)) continue;
        pat.values[nxt] = log_axis_step(pat.at(dir * (t - 1)), pat.at(dir * t), t);
    }
}

} // namespace detail

struct PowerSpec {
    Real c = 1.0;
    AngleTriple angles = AngleTriple::isotropic();
    int n = 8;
    RegionKind region = RegionKind::SectorBox; // SectorBox or StripHalfPlane
    Real construction_tol = 1e-8L;             // propagation abort threshold
};

// Hexagonal circle pattern z^c, 0 < c < 2, extended by the Euclidean centers
// of the circles.  Cauchy data: z_{0,0,0} = 0, z_{1,0,0} = 1,
// z_{0,1,0} = e^{i c (alpha1+alpha2)}, z_{0,0,-1} = e^{i c alpha2}; the
// half-plane additionally seeds z_{-1,0,0} = e^{i c pi},
// z_{0,-1,0} = e^{-i c alpha3}.  Axes fill by the constraint recurrence, the
// interior by cross-ratio propagation.
inline PatternMap build_zc(const PowerSpec& spec) {
    if (!(spec.c > 0.0L && spec.c < 2.0L))
        throw DomainError("build_zc: c must lie in (0,2); c = 2 degenerates (use build_z2)");
    if (spec.region != RegionKind::SectorBox && spec.region != RegionKind::StripHalfPlane)
        throw DomainError("build_zc: region must be SectorBox or StripHalfPlane");

    const AngleTriple& a = spec.angles;
    PatternMap pat;
    pat.deltas = angles_to_deltas(a);
    pat.meta.variant = "zc";
    pat.meta.c = spec.c;
    pat.meta.angles = a;

    bool half_plane = spec.region == RegionKind::StripHalfPlane;
    // Construction always runs on full 3-dimensional octants; a half-plane
    // request restricts to the strip at the end.
    pat.region = Region{RegionKind::SectorBox, spec.n};

    Complex c = spec.c;
    pat.values[{0, 0, 0}] = CPoint(Complex(0.0));
    pat.values[{1, 0, 0}] = CPoint(Complex(1.0));
    pat.values[{0, 1, 0}] = CPoint(cis(spec.c * (a.a1 + a.a2)));
    pat.values[{0, 0, -1}] = CPoint(cis(spec.c * a.a2));
    detail::fill_axis_zc(pat, {1, 0, 0}, c);
    detail::fill_axis_zc(pat, {0, 1, 0}, c);
    detail::fill_axis_zc(pat, {0, 0, -1}, c);
    propagate(pat, {FillOrder::Lex, spec.construction_tol});

    if (!half_plane) return pat;

    // The two remaining octants of the half plane m <= 0 are determined by
    // the seeds z_{-1,0,0} and z_{0,-1,0}.  Quad targets depend only
    // on the step families, not on step signs, and the constraint terms are
    // invariant under reflecting one coordinate, so each octant is a standard
    // sector build in flipped coordinates.
    auto build_octant = [&](bool flip_k, Complex flipped_axis_seed) {
        auto flip = [&](const LatticeIndex& q) {
            return flip_k ? LatticeIndex{-q.k, q.l, q.m} : LatticeIndex{q.k, -q.l, q.m};
        };
        PatternMap oct;
        oct.deltas = pat.deltas;
        oct.region = Region{RegionKind::SectorBox, spec.n};
        oct.values[{0, 0, 0}] = CPoint(Complex(0.0));
        oct.values[flip_k ? LatticeIndex{1, 0, 0} : LatticeIndex{0, 1, 0}] =
            CPoint(flipped_axis_seed);
        oct.values[flip_k ? LatticeIndex{0, 1, 0} : LatticeIndex{1, 0, 0}] =
            pat.at(flip_k ? LatticeIndex{0, 1, 0} : LatticeIndex{1, 0, 0});
        oct.values[{0, 0, -1}] = pat.at({0, 0, -1});
        detail::fill_axis_zc(oct, {1, 0, 0}, c);
        detail::fill_axis_zc(oct, {0, 1, 0}, c);
        detail::fill_axis_zc(oct, {0, 0, -1}, c);
        propagate(oct, {FillOrder::Lex, spec.construction_tol});
        for (const auto& [q, v] : oct.values) {
            LatticeIndex back = flip(q);
            if (pat.has(back))
                pat.meta.propagation_disagreement =
                    std::max(pat.meta.propagation_disagreement, chordal(pat.at(back), v));
            else
                pat.values[back] = v;
        }
        pat.meta.propagation_disagreement =
            std::max(pat.meta.propagation_disagreement, oct.meta.propagation_disagreement);
    };

    build_octant(true, cis(spec.c * kPi));
    build_octant(false, cis(-spec.c * a.a3));

    PatternMap out = pat;
    out.values.clear();
    out.region = Region{RegionKind::StripHalfPlane, spec.n};
    for (const auto& [q, v] : pat.values)
        if (out.region.contains(q)) out.values[q] = v;
    return out;
}

// Hexagonal circle pattern z^2: the central circle degenerates to a point,
// so the first ring z_{0,0,0} = z_{1,0,0} = z_{0,1,0} = z_{0,0,-1} = 0 and
// the closed-form second ring serve as Cauchy data; the axes continue with the
// c = 2 recurrence.  The stored DeltaTriple carries a factor 1/2, the
// dualization gauge that makes dualize(z^2) reproduce the log z values
// verbatim (quad targets only see the gauge-invariant ratios).
inline PatternMap build_z2(const AngleTriple& a, int n, Real construction_tol = 1e-8L) {
    PatternMap pat;
    DeltaTriple unit = angles_to_deltas(a);
    pat.deltas = DeltaTriple(0.5L * unit.d1, 0.5L * unit.d2, 0.5L * unit.d3);
    pat.meta.variant = "z2";
    pat.meta.c = 2.0;
    pat.meta.angles = a;
    pat.region = Region{RegionKind::SectorBox, n};

    Real a1 = a.a1, a2 = a.a2;
    pat.values[{0, 0, 0}] = CPoint(Complex(0.0));
    pat.values[{1, 0, 0}] = CPoint(Complex(0.0));
    pat.values[{0, 1, 0}] = CPoint(Complex(0.0));
    pat.values[{0, 0, -1}] = CPoint(Complex(0.0));
    pat.values[{2, 0, 0}] = CPoint(Complex(1.0));
    pat.values[{0, 0, -2}] = CPoint(cis(2.0L * a2));
    pat.values[{0, 2, 0}] = CPoint(cis(2.0L * (a1 + a2)));
    pat.values[{1, 0, -1}] = CPoint(std::sin(a2) / a2 * cis(a2));
    pat.values[{0, 1, -1}] = CPoint(std::sin(a1) / a1 * cis(a1 + 2.0L * a2));
    pat.values[{1, 1, 0}] = CPoint(std::sin(a1 + a2) / (a1 + a2) * cis(a1 + a2));

    detail::fill_axis_zc(pat, {1, 0, 0}, Complex(2.0), 2);
    detail::fill_axis_zc(pat, {0, 1, 0}, Complex(2.0), 2);
    detail::fill_axis_zc(pat, {0, 0, -1}, Complex(2.0), 2);
    propagate(pat, {FillOrder::Lex, construction_tol});
    return pat;
}

// Isotropic hexagonal circle pattern log z := (z^2)^*, seeded with the
// closed-form dual data (z_{0,0,0} = infinity) and continued by the c = 0 form
// of the constraint (... = 1) on the axes.
inline PatternMap build_log(int n, Real construction_tol = 1e-8L) {
    PatternMap pat;
    DeltaTriple unit = angles_to_deltas(AngleTriple::isotropic());
    pat.deltas = DeltaTriple(0.5L * unit.d1, 0.5L * unit.d2, 0.5L * unit.d3);
    pat.meta.variant = "log";
    pat.meta.c = 0.0;
    pat.meta.angles = AngleTriple::isotropic();
    pat.region = Region{RegionKind::SectorBox, n};

    const Real pi = kPi;
    const Real s3 = std::sqrt((Real)3.0L);
    pat.values[{0, 0, 0}] = CPoint::infinity();
    pat.values[{1, 0, 0}] = CPoint(Complex(0.0));
    pat.values[{0, 0, -1}] = CPoint(Complex(0.0, pi / 3.0L));
    pat.values[{0, 1, 0}] = CPoint(Complex(0.0, 2.0L * pi / 3.0L));
    pat.values[{2, 0, 0}] = CPoint(Complex(0.5));
    pat.values[{0, 0, -2}] = CPoint(Complex(0.5, pi / 3.0L));
    pat.values[{0, 2, 0}] = CPoint(Complex(0.5, 2.0L * pi / 3.0L));
    pat.values[{1, 0, -1}] = CPoint(pi / 6.0L * Complex(1.0L / s3, 1.0L));
    pat.values[{0, 1, -1}] = CPoint(pi / 6.0L * Complex(1.0L / s3, 3.0L));
    pat.values[{1, 1, 0}] = CPoint(pi / 3.0L * Complex(-1.0L / s3, 1.0L));

    detail::fill_axis_log(pat, {1, 0, 0});
    detail::fill_axis_log(pat, {0, 1, 0});
    detail::fill_axis_log(pat, {0, 0, -1});
    propagate(pat, {FillOrder::Lex, construction_tol});
    return pat;
}

// Closed form z = (k + l omega + m omega^2)^3 - (k + l + m) with
// Delta = (-3, -3 omega^2, -3 omega).
inline PatternMap build_z3(int n) {
    PatternMap pat;
    pat.deltas = DeltaTriple(-3.0, -3.0L * kOmega2, -3.0L * kOmega);
    pat.meta.variant = "z3";
    pat.meta.c = 3.0;
    pat.region = Region{RegionKind::FullBox, n};
    for (const LatticeIndex& p : pat.region.points()) {
        Complex z = embed_reference(p);
        pat.values[p] = CPoint(z * z * z - Complex(Real(sublattice_class(p))));
    }
    return pat;
}

} // namespace hexcp
