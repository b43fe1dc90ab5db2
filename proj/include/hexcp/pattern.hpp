#pragma once

#include <hexcp/cpoint.hpp>
#include <hexcp/deltas.hpp>
#include <hexcp/lattice.hpp>
#include <hexcp/mobius.hpp>

#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

namespace hexcp {

struct PatternMeta {
    std::string variant = "custom"; // zc | z2 | log | z3 | doyle | confsym | dual | ...
    Real c = 0.0;                   // exponent, where meaningful
    std::optional<AngleTriple> angles;
    Real propagation_disagreement = 0.0; // worst eighth-point face mismatch
    Real dual_closure = 0.0;             // worst quad closure of a dual integration
};

// Partial map LatticeIndex -> CPoint over a declared region, together with
// the edge constants the construction used.  Immutable once built.
struct PatternMap {
    Region region;
    DeltaTriple deltas;
    std::map<LatticeIndex, CPoint> values;
    PatternMeta meta;

    bool has(const LatticeIndex& p) const { return values.count(p) != 0; }

    const CPoint& at(const LatticeIndex& p) const {
        auto it = values.find(p);
        if (it == values.end()) {
            std::ostringstream os;
            os << "pattern value missing at (" << p.k << "," << p.l << "," << p.m << ")";
            throw DomainError(os.str());
        }
        return it->second;
    }

    bool has_finite(const LatticeIndex& p) const {
        auto it = values.find(p);
        return it != values.end() && !it->second.is_infinite();
    }

    Complex value(const LatticeIndex& p) const { return at(p).value(); }
};

// Elementary quadrilateral [p, p+u, p+u+v, p+v]; fam_u / fam_v are the step
// families, so the cross-ratio target is Delta_{fam_u} / Delta_{fam_v}.
struct Quad {
    std::array<LatticeIndex, 4> corner;
    int fam_u, fam_v;
};

inline Quad make_quad(const LatticeIndex& p, const LatticeIndex& u, const LatticeIndex& v) {
    int fu = step_family(u), fv = step_family(v);
    if (fu == 0 || fv == 0 || fu == fv) throw DomainError("make_quad: invalid span pair");
    return Quad{{p, p + u, p + u + v, p + v}, fu, fv};
}

// Every elementary quadrilateral with all four corners in the pattern,
// each exactly once (spanned from its minimal corner by +e_i, +e_j, i<j).
inline std::vector<Quad> enumerate_quads(const PatternMap& pat) {
    std::vector<Quad> out;
    for (const auto& [p, val] : pat.values) {
        (void)val;
        for (int i = 1; i <= 3; ++i)
            for (int j = i + 1; j <= 3; ++j) {
                Quad q = make_quad(p, unit_step(i), unit_step(j));
                if (pat.has(q.corner[1]) && pat.has(q.corner[2]) && pat.has(q.corner[3]))
                    out.push_back(q);
            }
    }
    return out;
}

inline bool quad_degenerate(const PatternMap& pat, const Quad& q, Real tol = 1e-12L) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (chordal(pat.at(q.corner[i]), pat.at(q.corner[j])) < tol) return true;
    return false;
}

// Chordal distance between the measured cross-ratio and its target.
inline Real quad_residual(const PatternMap& pat, const Quad& q) {
    CPoint measured = cross_ratio(pat.at(q.corner[0]), pat.at(q.corner[1]), pat.at(q.corner[2]),
                                  pat.at(q.corner[3]));
    return chordal(measured, CPoint(quad_target(pat.deltas, q.fam_u, q.fam_v)));
}

struct ResidualSweep {
    Real max_residual = 0.0;
    int evaluated = 0;
    int skipped = 0; // degenerate quadrilaterals (coincident corners)
};

inline ResidualSweep max_quad_residual(const PatternMap& pat) {
    ResidualSweep sweep;
    for (const Quad& q : enumerate_quads(pat)) {
        if (quad_degenerate(pat, q)) {
            ++sweep.skipped;
            continue;
        }
        sweep.max_residual = std::max(sweep.max_residual, quad_residual(pat, q));
        ++sweep.evaluated;
    }
    return sweep;
}

// Eighth-point property: the hexahedron on seeds z_p, z_{p+e1}, z_{p+e2},
// z_{p-e3} with opposite-face cross-ratios q1, q2, q3 (q1 q2 q3 = 1) is
// determined, and the three ways to compute the eighth corner agree.
// Returns all eight corner values in hexahedron() order plus the worst
// disagreement between the alternative eighth-corner computations.
struct EighthPointResult {
    std::array<CPoint, 8> corner;
    Real disagreement = 0.0;
};

inline EighthPointResult eighth_point(const std::array<CPoint, 4>& seed, Complex q1, Complex q2,
                                      Complex q3) {
    if (std::abs(q1 * q2 * q3 - Complex(1.0)) > 1e-10L)
        throw DomainError("eighth_point: q1*q2*q3 must equal 1");
    const CPoint& zp = seed[0];
    const CPoint& ze1 = seed[1];
    const CPoint& ze2 = seed[2];
    const CPoint& zm3 = seed[3];

    // Faces through the seed corner:
    //   q1 = q(z_p, z_{p-e3}, z_{p+e2-e3}, z_{p+e2})
    //   q2 = q(z_p, z_{p+e1}, z_{p+e1-e3}, z_{p-e3})
    //   q3 = q(z_p, z_{p+e2}, z_{p+e1+e2}, z_{p+e1})
    CPoint z_e1m3 = fourth_point(CPoint(q2), zp, ze1, zm3, 3);
    CPoint z_e1e2 = fourth_point(CPoint(q3), zp, ze2, ze1, 3);
    CPoint z_e2m3 = fourth_point(CPoint(q1), zp, zm3, ze2, 3);

    // Opposite faces give three routes to the eighth corner.
    CPoint v1 = fourth_point(CPoint(q1), ze1, z_e1m3, z_e1e2, 3);
    CPoint v2 = fourth_point(CPoint(q2), ze2, z_e1e2, z_e2m3, 3);
    CPoint v3 = fourth_point(CPoint(q3), zm3, z_e2m3, z_e1m3, 3);

    EighthPointResult out;
    out.corner = {zp, ze1, ze2, zm3, z_e1e2, z_e1m3, z_e2m3, v1};
    out.disagreement = std::max(chordal(v1, v2), std::max(chordal(v1, v3), chordal(v2, v3)));
    return out;
}

enum class FillOrder { Lex, AntiLex };

struct PropagateOptions {
    FillOrder order = FillOrder::Lex;
    Real tolerance = 1e-8L; // abort threshold for face disagreement
};

// Fills the region interior from already-present seed data (axes or walls),
// point by point through elementary quadrilaterals oriented toward the
// origin.  Every point reachable by more than one face is cross-checked; the
// worst disagreement is stored in meta.propagation_disagreement.
inline void propagate(PatternMap& pat, const PropagateOptions& opt = {}) {
    std::vector<LatticeIndex> targets;
    for (const LatticeIndex& p : pat.region.points())
        if (!pat.has(p)) targets.push_back(p);

    auto l1 = [](const LatticeIndex& p) { return std::abs(p.k) + std::abs(p.l) + std::abs(p.m); };
    std::stable_sort(targets.begin(), targets.end(), [&](const LatticeIndex& a, const LatticeIndex& b) {
        if (l1(a) != l1(b)) return l1(a) < l1(b);
        if (opt.order == FillOrder::Lex) return a < b;
        return b < a;
    });

    Real worst = pat.meta.propagation_disagreement;
    for (const LatticeIndex& p : targets) {
        std::vector<CPoint> candidates;
        int sk = p.k > 0 ? -1 : 1;
        int sl = p.l > 0 ? -1 : 1;
        int sm = p.m > 0 ? -1 : 1;
        LatticeIndex in1 = unit_step(1) * sk, in2 = unit_step(2) * sl, in3 = unit_step(3) * sm;
        std::array<std::pair<LatticeIndex, LatticeIndex>, 3> spans = {
            {{in1, in2}, {in1, in3}, {in2, in3}}};
        std::array<std::pair<int, int>, 3> coords = {{{p.k, p.l}, {p.k, p.m}, {p.l, p.m}}};
        for (int s = 0; s < 3; ++s) {
            if (coords[s].first == 0 || coords[s].second == 0) continue;
            const auto& [u, v] = spans[s];
            LatticeIndex a = p + u, b = p + u + v, c = p + v;
            if (!pat.has(a) || !pat.has(b) || !pat.has(c)) continue;
            // Quad [p, p+u, p+u+v, p+v]: target Delta_{fam u}/Delta_{fam v}.
            if (chordal(pat.at(a), pat.at(b)) < 1e-13L || chordal(pat.at(b), pat.at(c)) < 1e-13L ||
                chordal(pat.at(a), pat.at(c)) < 1e-13L)
                continue;
            Complex target = quad_target(pat.deltas, step_family(u), step_family(v));
            candidates.push_back(fourth_point(CPoint(target), pat.at(a), pat.at(b), pat.at(c), 1));
        }
        if (candidates.empty()) {
            std::ostringstream os;
            os << "propagate: no usable face at (" << p.k << "," << p.l << "," << p.m
               << "); missing seed data";
            throw DomainError(os.str());
        }
        for (size_t i = 1; i < candidates.size(); ++i) {
            Real d = chordal(candidates[0], candidates[i]);
            worst = std::max(worst, d);
            if (d > opt.tolerance) {
                std::ostringstream os;
                os << "propagate: face disagreement " << d << " at (" << p.k << "," << p.l << ","
                   << p.m << ")";
                throw InconsistentError(os.str());
            }
        }
        // Averaging the agreeing faces damps roundoff growth along the fill.
        bool finite = true;
        for (const CPoint& c : candidates)
            if (c.is_infinite()) finite = false;
        if (finite && candidates.size() > 1) {
            Complex mean(0.0);
            for (const CPoint& c : candidates) mean += c.value();
            pat.values[p] = CPoint(mean / Real(candidates.size()));
        } else {
            pat.values[p] = candidates[0];
        }
    }
    pat.meta.propagation_disagreement = worst;
}

// Restriction of a pattern to its strip part |k+l+m| <= 1 (the hexagonal
// circle pattern proper).
inline PatternMap strip_restrict(const PatternMap& pat) {
    PatternMap out = pat;
    out.values.clear();
    RegionKind kind = RegionKind::StripBox;
    if (pat.region.kind == RegionKind::SectorBox || pat.region.kind == RegionKind::SectorStrip)
        kind = RegionKind::SectorStrip;
    else if (pat.region.kind == RegionKind::StripHalfPlane)
        kind = RegionKind::StripHalfPlane;
    out.region = Region{kind, pat.region.n};
    for (const auto& [p, v] : pat.values)
        if (std::abs(sublattice_class(p)) <= 1) out.values[p] = v;
    return out;
}

// Duality transformation: integrates z*_in - z*_out = Delta_n / (z_in - z_out)
// over a spanning tree from `base`, then reports the worst closure residual
// over all quadrilaterals.  Edges with coincident endpoint values cannot be
// crossed (the dual difference is infinite); vertices reachable only through
// such edges receive the value infinity.  Edges with one endpoint at infinity
// carry dual difference zero and are crossed normally.
inline PatternMap dualize(const PatternMap& pat, const LatticeIndex& base = {0, 0, 0},
                          Complex base_value = Complex(0.0)) {
    if (!pat.has(base)) throw DomainError("dualize: base point not in pattern");

    auto edge_step = [&](const LatticeIndex& from, const LatticeIndex& to,
                         int family) -> std::optional<Complex> {
        const CPoint& zf = pat.at(from);
        const CPoint& zt = pat.at(to);
        if (zf.is_infinite() && zt.is_infinite())
            throw SingularError("dualize: edge with both endpoints infinite");
        if (zf.is_infinite() || zt.is_infinite()) return Complex(0.0);
        Complex d = zt.value() - zf.value();
        Real scale = std::abs(zf.value()) + std::abs(zt.value()) + 1.0L;
        if (std::abs(d) < 1e-13L * scale) return std::nullopt; // singular edge
        return pat.deltas[family] / d;
    };

    PatternMap dual;
    dual.region = pat.region;
    dual.deltas = pat.deltas;
    dual.meta = pat.meta;
    dual.meta.variant = pat.meta.variant + "*";
    dual.meta.c = 2.0L - pat.meta.c;

    if (pat.at(base).is_infinite())
        throw DomainError("dualize: base point must have finite value");

    std::map<LatticeIndex, Complex> dv;
    dv[base] = base_value;
    std::queue<LatticeIndex> todo;
    todo.push(base);
    while (!todo.empty()) {
        LatticeIndex p = todo.front();
        todo.pop();
        for (int n = 1; n <= 3; ++n)
            for (int sign : {+1, -1}) {
                LatticeIndex q = p + unit_step(n) * sign;
                if (!pat.has(q) || dv.count(q)) continue;
                auto step = edge_step(p, q, n);
                if (!step) continue;
                dv[q] = dv[p] + *step;
                todo.push(q);
            }
    }

    for (const auto& [p, v] : pat.values) {
        auto it = dv.find(p);
        if (it != dv.end())
            dual.values[p] = CPoint(it->second);
        else
            dual.values[p] = CPoint::infinity(); // isolated behind singular edges
        (void)v;
    }

    // Closure audit: around every quadrilateral whose edges are all regular
    // the oriented dual steps must sum to zero.
    Real worst = 0.0;
    for (const Quad& q : enumerate_quads(pat)) {
        std::array<std::optional<Complex>, 4> step;
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i) {
            const LatticeIndex& from = q.corner[i];
            const LatticeIndex& to = q.corner[(i + 1) % 4];
            int fam = step_family(to - from);
            step[i] = edge_step(from, to, fam);
            if (!step[i]) ok = false;
        }
        if (!ok) continue;
        Complex closure = *step[0] + *step[1] + *step[2] + *step[3];
        worst = std::max(worst, std::abs(closure));
    }
    dual.meta.dual_closure = worst;
    if (worst > 1e-8L)
        throw InconsistentError("dualize: closure residual " + std::to_string(double(worst)) +
                                " exceeds 1e-8; input does not satisfy the cross-ratio system");
    return dual;
}

// Pointwise z -> 1/z; exact at 0 and infinity.  The result satisfies the
// non-autonomous constraint with the negated exponent.
inline PatternMap invert_pattern(const PatternMap& pat) {
    PatternMap out = pat;
    out.meta.c = -pat.meta.c;
    out.meta.variant = "inv(" + pat.meta.variant + ")";
    for (auto& [p, v] : out.values) {
        (void)p;
        v = reciprocal(v);
    }
    return out;
}

// Applies a Mobius transformation to every value (used for alignment tests).
inline PatternMap transform_pattern(const PatternMap& pat, const Mobius& mob) {
    PatternMap out = pat;
    for (auto& [p, v] : out.values) {
        (void)p;
        v = mob.apply(v);
    }
    return out;
}

} // namespace hexcp
