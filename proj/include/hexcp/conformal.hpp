#pragma once

#include <hexcp/circle.hpp>
#include <hexcp/pattern.hpp>

#include <map>
#include <optional>
#include <limits>
#include <vector>

namespace hexcp {

// Vertex loop of the hexagon centered at an s=0 vertex, oriented so that the
// edge families read 1,2,3,1,2,3; edge i joins loop[i] and loop[i+1 mod 6].
// (This orientation, together with the S convention below, reproduces the
// reference values T = -2 and S = e^{-i pi/3} on the regular pattern.)
inline std::array<LatticeIndex, 6> hexagon_loop(const LatticeIndex& center) {
    if (sublattice_class(center) != 0) throw DomainError("hexagon_loop: center must have s = 0");
    return {{center - unit_step(2), center + unit_step(3), center - unit_step(1),
             center + unit_step(2), center - unit_step(3), center + unit_step(1)}};
}

// HL-neighbor of an intersection vertex across the edge of class E^H_f.
inline LatticeIndex hl_neighbor(const LatticeIndex& v, int f) {
    int s = sublattice_class(v);
    if (s != 1 && s != -1) throw DomainError("hl_neighbor: vertex must have s = +-1");
    LatticeIndex step = unit_step(f % 3 + 1) + unit_step((f + 1) % 3 + 1);
    return s > 0 ? v - step : v + step;
}

// Unordered edge key for HL edges (pairs of s = +-1 vertices).
struct EdgeKey {
    LatticeIndex a, b;
    EdgeKey(LatticeIndex x, LatticeIndex y) : a(std::min(x, y)), b(std::max(x, y)) {}
    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct TSData {
    std::map<EdgeKey, Complex> t;
    Complex s{0.0};
    Real t_disagreement = 0.0; // worst left/right hexagon mismatch
    Real s_deviation = 0.0;    // worst deviation from constancy

    Complex t_at(const EdgeKey& e) const {
        auto it = t.find(e);
        if (it == t.end()) throw DomainError("TSData: missing T value");
        return it->second;
    }
};

// Cross-ratio of a vertex and its three neighbors; S^{(i)} equals
// e^{-i alpha_i} sin(alpha_{i+1}) / sin(alpha_{i+2}) on constant-angle
// patterns.  Indices cyclic in {1,2,3}.
inline Complex vertex_s(const PatternMap& pat, const LatticeIndex& v, int i = 1) {
    auto cyc = [](int x) { return (x - 1) % 3 + 1; };
    CPoint w = pat.at(v);
    CPoint ni = pat.at(hl_neighbor(v, cyc(i)));
    CPoint nj = pat.at(hl_neighbor(v, cyc(i + 1)));
    CPoint nk = pat.at(hl_neighbor(v, cyc(i + 2)));
    CPoint s = cross_ratio(ni, nk, w, nj);
    if (s.is_infinite()) throw SingularError("vertex_s: infinite cross-ratio");
    return s.value();
}

// T and S data measured from a strip pattern.  T per HL edge is computed
// from both adjacent hexagons and must agree; S^{(1)} per vertex must be
// constant.  Violations beyond `tol` mean the pattern does not have constant
// intersection angles.
inline TSData compute_TS(const PatternMap& pat, Real tol = 1e-8L) {
    TSData out;
    bool have_s = false;

    // Hexagons are enumerated by their center index; only the six boundary
    // vertices enter the measurement, so patterns without center values
    // (general conformal data) are fine.
    for (const LatticeIndex& c : pat.region.points()) {
        if (sublattice_class(c) != 0) continue;
        auto loop = hexagon_loop(c);
        bool complete = true;
        for (const auto& v : loop)
            if (!pat.has(v)) complete = false;
        if (!complete) continue;
        for (int i = 0; i < 6; ++i) {
            CPoint t = cross_ratio(pat.at(loop[i]), pat.at(loop[(i + 1) % 6]),
                                   pat.at(loop[(i + 2) % 6]), pat.at(loop[(i + 5) % 6]));
            if (t.is_infinite()) throw SingularError("compute_TS: infinite T");
            EdgeKey key(loop[i], loop[(i + 1) % 6]);
            auto it = out.t.find(key);
            if (it == out.t.end()) {
                out.t[key] = t.value();
            } else {
                out.t_disagreement = std::max(out.t_disagreement, std::abs(it->second - t.value()));
            }
        }
    }

    for (const auto& [v, val] : pat.values) {
        (void)val;
        int s = sublattice_class(v);
        if (s != 1 && s != -1) continue;
        bool complete = true;
        for (int f = 1; f <= 3; ++f)
            if (!pat.has(hl_neighbor(v, f))) complete = false;
        if (!complete) continue;
        Complex sv = vertex_s(pat, v, 1);
        if (!have_s) {
            out.s = sv;
            have_s = true;
        } else {
            out.s_deviation = std::max(out.s_deviation, std::abs(sv - out.s));
        }
    }
    if (!have_s) throw DomainError("compute_TS: no complete vertex star in pattern");
    if (out.t_disagreement > tol || out.s_deviation > tol)
        throw InconsistentError("compute_TS: pattern does not have constant angles (T/S not consistent)");
    return out;
}

// Max deviation among the four expressions of the hexagon equation
// T1/T4 = T3/T6 = T5/T2 = (T1 + T3 - 1 - T1 T2 T3)/(1 - T2).
inline Real hexagon_T_residual(const std::array<Complex, 6>& t) {
    if (std::abs(t[1] - Complex(1.0)) < 1e-14L)
        throw SingularError("hexagon_T_residual: T2 = 1 is singular");
    std::array<Complex, 4> e = {t[0] / t[3], t[2] / t[5], t[4] / t[1],
                                (t[0] + t[2] - 1.0L - t[0] * t[1] * t[2]) / (1.0L - t[1])};
    Real worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) worst = std::max(worst, std::abs(e[i] - e[j]));
    return worst;
}

// T values of one hexagon in loop-edge order.
inline std::array<Complex, 6> hexagon_ts(const TSData& ts, const LatticeIndex& center) {
    auto loop = hexagon_loop(center);
    std::array<Complex, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = ts.t_at(EdgeKey(loop[i], loop[(i + 1) % 6]));
    return out;
}

// Recovers the angles from S^{(1)} = e^{-i alpha_1} sin(alpha_2)/sin(alpha_3):
// e^{2 i alpha_1} = conj(S)/S, e^{2 i alpha_2} = (1-S)/(1-conj(S)), and
// alpha_3 the complement.  (From sin(alpha_2) = |S| sin(alpha_1 + alpha_2)
// one gets tan(alpha_2) = -Im(1-conj S)/Re(1-conj S).)
inline AngleTriple angles_from_S(Complex s) {
    if (std::abs(s) < 1e-14L || std::abs(std::imag(s)) < 1e-14L)
        throw DomainError("angles_from_S: S is singular (0 or real)");
    auto half_arg = [](Complex u) {
        Real a = std::arg(u); // (-pi, pi]
        if (a <= 0.0L) a += 2.0L * kPi;
        return a / 2.0L;
    };
    Complex sb = std::conj(s);
    Real a1 = half_arg(sb / s);
    Real a2 = half_arg((1.0L - s) / (1.0L - sb));
    Real a3 = half_arg((s / sb) * ((1.0L - sb) / (1.0L - s)));
    if (std::abs(a1 + a2 + a3 - kPi) > 1e-9L)
        throw DomainError("angles_from_S: recovered angles do not sum to pi");
    return AngleTriple(a1, a2, kPi - a1 - a2);
}

// The linear family a_k = a0 + k Delta, b_l = b0 + l Delta, c_m = c0 + m Delta
// with Delta = 1 - a0 - b0 - c0 solves the per-hexagon relation
// a_k + b_l + c_m = 1 identically.
struct ABCSolution {
    Complex a0, b0, c0;
    Complex delta() const { return Complex(1.0) - a0 - b0 - c0; }
};

// Chain index of an HL edge: for the edge of family f, the f-th coordinate
// of its s = +1 endpoint; the family-3 index carries an offset of +1 so that
// the three indices of every hexagon sum to 1 (the labelling convention of
// the a/b/c grid).
inline std::pair<int, int> abc_edge_index(const EdgeKey& e) {
    LatticeIndex d = e.b - e.a;
    LatticeIndex vplus = sublattice_class(e.a) == 1 ? e.a : e.b;
    if (sublattice_class(vplus) != 1) throw DomainError("abc_edge_index: not an HL edge");
    int family = 0;
    for (int f = 1; f <= 3; ++f) {
        LatticeIndex step = unit_step(f % 3 + 1) + unit_step((f + 1) % 3 + 1);
        if (d == step || d == -step) family = f;
    }
    if (family == 0) throw DomainError("abc_edge_index: not an HL edge");
    int idx = family == 1 ? vplus.k : family == 2 ? vplus.l : vplus.m + 1;
    return {family, idx};
}

// T value the ABC solution assigns to an edge: T = 1 - 1/R with R the chain
// value a_k, b_l or c_m of the edge's family.
inline Complex abc_T(const ABCSolution& sol, const EdgeKey& e) {
    auto [family, idx] = abc_edge_index(e);
    Complex base = family == 1 ? sol.a0 : family == 2 ? sol.b0 : sol.c0;
    Complex r = base + Real(idx) * sol.delta();
    if (std::abs(r) < 1e-14L) throw SingularError("abc_T: chain value 0 makes T infinite");
    return Complex(1.0) - Complex(1.0) / r;
}

// |multi-ratio of the six intersection points + 1|; zero iff the flower is
// conformally symmetric.
inline Real conformal_symmetry_residual(const PatternMap& pat, const LatticeIndex& center) {
    auto loop = hexagon_loop(center);
    std::array<CPoint, 6> pts;
    for (int i = 0; i < 6; ++i) pts[i] = pat.at(loop[i]);
    CPoint m = multi_ratio(pts);
    if (m.is_infinite()) return std::numeric_limits<Real>::infinity();
    return std::abs(m.value() + 1.0L);
}

// Builds the map w from a solution T of the hexagon equations and a choice
// of S, starting from three seed vertices; the result is unique up to
// Mobius transformations.  Fills every strip vertex of the region reachable by the
// two propagation moves:
//   - around a hexagon, three consecutive vertices and the edge T give the
//     next vertex;
//   - at a vertex star, three of {w, n1, n2, n3} and S give the fourth.
inline PatternMap reconstruct_from_TS(const TSData& ts, const Region& region,
                                      const std::map<LatticeIndex, CPoint>& seeds) {
    if (std::abs(ts.s) < 1e-12L || std::abs(ts.s - 1.0L) < 1e-12L)
        throw DomainError("reconstruct_from_TS: singular S");
    PatternMap pat;
    pat.region = region;
    pat.meta.variant = "reconstructed";
    for (const auto& [p, v] : seeds) {
        if (!region.contains(p)) throw DomainError("reconstruct_from_TS: seed outside region");
        pat.values[p] = v;
    }

    std::vector<LatticeIndex> centers, vertices;
    for (const LatticeIndex& p : region.points()) {
        int s = sublattice_class(p);
        if (s == 0)
            centers.push_back(p);
        else if (s == 1 || s == -1)
            vertices.push_back(p);
    }

    bool progress = true;
    while (progress) {
        progress = false;
        // Hexagon steps.
        for (const LatticeIndex& c : centers) {
            auto loop = hexagon_loop(c);
            for (int i = 0; i < 6; ++i) {
                // T_i = q(w_i, w_{i+1}, w_{i+2}, w_{i-1}): any three of the
                // four consecutive vertices determine the fourth.
                std::array<LatticeIndex, 4> quad = {loop[i], loop[(i + 1) % 6], loop[(i + 2) % 6],
                                                    loop[(i + 5) % 6]};
                EdgeKey key(loop[i], loop[(i + 1) % 6]);
                auto t = ts.t.find(key);
                if (t == ts.t.end()) continue;
                int missing = -1, known = 0;
                for (int j = 0; j < 4; ++j) {
                    if (pat.has(quad[j]))
                        ++known;
                    else
                        missing = j;
                }
                if (known == 4) {
                    // completed quadruple: the data must be consistent
                    CPoint meas = cross_ratio(pat.at(quad[0]), pat.at(quad[1]), pat.at(quad[2]),
                                              pat.at(quad[3]));
                    if (chordal(meas, CPoint(t->second)) > 1e-6L)
                        throw InconsistentError("reconstruct_from_TS: T data is inconsistent");
                    continue;
                }
                if (known != 3 || !region.contains(quad[missing])) continue;
                std::array<CPoint, 3> rest;
                int idx = 0;
                for (int j = 0; j < 4; ++j)
                    if (j != missing) rest[idx++] = pat.at(quad[j]);
                pat.values[quad[missing]] =
                    fourth_point(CPoint(t->second), rest[0], rest[1], rest[2], missing + 1);
                progress = true;
            }
        }
        // Vertex-star steps with the constant S.
        for (const LatticeIndex& v : vertices) {
            std::array<LatticeIndex, 4> quad = {hl_neighbor(v, 1), hl_neighbor(v, 3), v,
                                                hl_neighbor(v, 2)};
            int missing = -1, known = 0;
            for (int j = 0; j < 4; ++j) {
                if (pat.has(quad[j]))
                    ++known;
                else
                    missing = j;
            }
            if (known != 3 || !region.contains(quad[missing])) continue;
            std::array<CPoint, 3> rest;
            int idx = 0;
            for (int j = 0; j < 4; ++j)
                if (j != missing) rest[idx++] = pat.at(quad[j]);
            pat.values[quad[missing]] = fourth_point(CPoint(ts.s), rest[0], rest[1], rest[2], missing + 1);
            progress = true;
        }
    }
    return pat;
}

// Completes the s = 0 centers of a reconstructed circle pattern with the
// Euclidean centers of the circumcircles through the hexagon vertices; the
// remaining vertices are checked to be concyclic.
inline void complete_centers(PatternMap& pat, Real tol = 1e-7L) {
    std::vector<LatticeIndex> centers;
    for (const LatticeIndex& p : pat.region.points())
        if (sublattice_class(p) == 0 && !pat.has(p)) centers.push_back(p);
    for (const LatticeIndex& c : centers) {
        auto loop = hexagon_loop(c);
        bool complete = true;
        for (const auto& v : loop)
            if (!pat.has(v)) complete = false;
        if (!complete) continue;
        Circle circ = circumcircle(pat.at(loop[0]), pat.at(loop[2]), pat.at(loop[4]));
        if (circ.is_line) continue; // center at infinity; leave unset
        for (int i : {1, 3, 5}) {
            if (pat.at(loop[i]).is_infinite()) continue;
            Real err = std::abs(std::abs(pat.value(loop[i]) - circ.center) - circ.radius);
            if (err > tol * std::max((Real)1.0L, circ.radius))
                throw InconsistentError("complete_centers: hexagon vertices not concyclic");
        }
        pat.values[c] = CPoint(circ.center);
    }
}

// Conformally symmetric pattern from a linear ABC solution: the T map comes
// from abc_T, S is free, and the three seed vertices fix the Mobius freedom.
inline PatternMap build_confsym(const ABCSolution& sol, Complex s, int n,
                                std::optional<std::array<CPoint, 3>> seed_values = std::nullopt) {
    Region region{RegionKind::StripBox, n};
    TSData ts;
    ts.s = s;
    for (const LatticeIndex& p : region.points()) {
        if (sublattice_class(p) != 1) continue;
        for (int f = 1; f <= 3; ++f) {
            LatticeIndex q = hl_neighbor(p, f);
            if (!region.contains(q)) continue;
            EdgeKey key(p, q);
            ts.t[key] = abc_T(sol, key);
        }
    }
    // Seeds: three consecutive vertices of the hexagon around the origin; the
    // defaults reproduce the regular pattern for T = -2, S = e^{-i pi/3}.
    auto loop = hexagon_loop({0, 0, 0});
    std::array<CPoint, 3> sv = seed_values.value_or(std::array<CPoint, 3>{
        CPoint(embed_reference(loop[0])), CPoint(embed_reference(loop[1])),
        CPoint(embed_reference(loop[2]))});
    std::map<LatticeIndex, CPoint> seeds = {
        {loop[0], sv[0]}, {loop[1], sv[1]}, {loop[2], sv[2]}};
    PatternMap pat = reconstruct_from_TS(ts, region, seeds);
    // Real-negative T gives a circle pattern and the centers exist; for
    // general complex data the map has no circles and stays vertices-only.
    try {
        complete_centers(pat);
    } catch (const Error&) {
        for (const LatticeIndex& p : region.points())
            if (sublattice_class(p) == 0) pat.values.erase(p);
    }
    pat.meta.variant = "confsym";
    return pat;
}

} // namespace hexcp
