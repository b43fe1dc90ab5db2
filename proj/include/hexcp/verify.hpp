#pragma once

#include <hexcp/builders.hpp>
#include <hexcp/conformal.hpp>
#include <hexcp/mat2.hpp>
#include <hexcp/pattern.hpp>

#include <optional>
#include <vector>

namespace hexcp {

// ---------------------------------------------------------------------------
// Zero curvature in the lambda picture.
// ---------------------------------------------------------------------------

// Unnormalized transition matrix on the oriented edge (from -> to):
//   [[1, lambda (z_in - z_out)], [lambda Delta_n / (z_in - z_out), 1]],
// the dual difference eliminated through the duality relation.  Twisted
// symmetry L(-lambda) = sigma3 L(lambda) sigma3 and det = 1 - lambda^2 Delta_n.
inline Mat2 lax_edge(const PatternMap& pat, const LatticeIndex& from, const LatticeIndex& to,
                     Complex lambda) {
    int fam = step_family(to - from);
    if (fam == 0) throw DomainError("lax_edge: not a lattice edge");
    if (!pat.has_finite(from) || !pat.has_finite(to))
        throw DomainError("lax_edge: endpoint missing or infinite");
    Complex dz = pat.value(to) - pat.value(from);
    if (dz == Complex(0.0)) throw SingularError("lax_edge: zero edge difference");
    return Mat2{1.0, lambda * dz, lambda * pat.deltas[fam] / dz, 1.0};
}

// || L4 L3 L2 L1 - (1 - lambda^2 Delta_a)(1 - lambda^2 Delta_b) I || around
// the quadrilateral; the scalar target absorbs the normalization without
// choosing square-root branches.
inline Real quad_zero_curvature(const PatternMap& pat, const Quad& q, Complex lambda) {
    Mat2 m = Mat2::identity();
    for (int i = 0; i < 4; ++i) m = lax_edge(pat, q.corner[i], q.corner[(i + 1) % 4], lambda) * m;
    Complex l2 = lambda * lambda;
    Complex target = (Complex(1.0) - l2 * pat.deltas[q.fam_u]) * (Complex(1.0) - l2 * pat.deltas[q.fam_v]);
    return (m - Mat2::identity() * target).frobenius();
}

// Ordered product of transition matrices along the canonical path from
// `base` to `p` (all k-steps, then l, then m), Psi(base) = I.
inline Mat2 wave_function(const PatternMap& pat, const LatticeIndex& base, const LatticeIndex& p,
                          Complex lambda, bool alternate_path = false) {
    auto path = alternate_path ? path_between_alt(base, p) : path_between(base, p);
    Mat2 psi = Mat2::identity();
    for (const PathStep& st : path) psi = lax_edge(pat, st.from, st.to, lambda) * psi;
    return psi;
}

// Sym formula: dPsi/dlambda at lambda = 0 telescopes to
// [[0, z(p) - z(base)], [z*(p) - z*(base), 0]].  The analytic derivative is
// the path sum of the edge derivatives [[0, dz], [Delta_n/dz, 0]]; the (2,1)
// entry is compared against the integrated dual pattern and the whole matrix
// against a centered finite difference of the wave function.
inline Real sym_check(const PatternMap& pat, const PatternMap& dual, const LatticeIndex& base,
                      const LatticeIndex& p) {
    Mat2 deriv{0.0, 0.0, 0.0, 0.0};
    for (const PathStep& st : path_between(base, p)) {
        Complex dz = pat.value(st.to) - pat.value(st.from);
        deriv = deriv + Mat2{0.0, dz, pat.deltas[st.family] / dz, 0.0};
    }
    Complex z_diff = pat.value(p) - pat.value(base);
    Complex zs_diff = dual.value(p) - dual.value(base);
    Real res = std::max(std::abs(deriv.m01 - z_diff), std::abs(deriv.m10 - zs_diff));
    res = std::max(res, std::max(std::abs(deriv.m00), std::abs(deriv.m11)));
    return res;
}

// Centered finite-difference cross-check of the Sym derivative.
inline Mat2 wave_derivative_fd(const PatternMap& pat, const LatticeIndex& base,
                               const LatticeIndex& p, Real h = 1e-6L) {
    Mat2 plus = wave_function(pat, base, p, Complex(h));
    Mat2 minus = wave_function(pat, base, p, Complex(-h));
    return (plus - minus) * Complex(1.0L / (2.0L * h));
}

// ---------------------------------------------------------------------------
// Isomonodromic matrices in the mu picture.
// ---------------------------------------------------------------------------

// A(mu) = C/mu + sum_n B^(n)/(mu - 1/Delta_n); requires all six axis
// neighbors finite.  The off-diagonal signs of the B blocks are fixed by the
// residue conditions of the compatibility equation at the poles 1/Delta_n;
// with these blocks the compatibility with the mu-evolution closes to
// machine precision on constructed patterns.
inline Mat2 iso_A(const PatternMap& pat, const ConstraintParams& par, const LatticeIndex& p,
                  Complex mu) {
    if (!pat.has_finite(p)) throw DomainError("iso_A: value missing or infinite");
    for (int n = 1; n <= 3; ++n) {
        if (std::abs(mu - Complex(1.0) / pat.deltas[n]) < 1e-12L)
            throw DomainError("iso_A: mu at a pole 1/Delta_n");
    }
    if (std::abs(mu) < 1e-12L) throw DomainError("iso_A: mu at the pole 0");

    Complex z = pat.value(p);
    Mat2 c{-par.b * z - par.c / 2.0L, par.b * z * z + par.c * z + par.d, par.b,
           par.b * z + par.c / 2.0L};
    Mat2 a = c * (Complex(0.5) / mu);

    std::array<Complex, 3> coeff = {Complex(Real(p.k)) - par.a1, Complex(Real(p.l)) - par.a2,
                                    Complex(Real(p.m)) - par.a3};
    std::array<Complex, 3> ashift = {par.a1, par.a2, par.a3};
    for (int n = 1; n <= 3; ++n) {
        LatticeIndex up = p + unit_step(n);
        LatticeIndex dn = p - unit_step(n);
        if (!pat.has_finite(up) || !pat.has_finite(dn))
            throw DomainError("iso_A: axis neighbor missing or infinite");
        Complex znext = pat.value(up), zprev = pat.value(dn);
        Complex den = znext - zprev;
        Real nscale = std::abs(znext) + std::abs(zprev) + std::abs(z);
        if (std::abs(den) < 1e-13L * std::max(nscale, (Real)1.0L))
            throw SingularError("iso_A: degenerate axis neighbors");
        Complex f = (znext - z), g = (z - zprev);
        Mat2 b = Mat2{f, -f * g, -1.0, g} * (coeff[n - 1] / den) +
                 Mat2::identity() * (ashift[n - 1] / 2.0L);
        a = a + b * (Complex(1.0) / (mu - Complex(1.0) / pat.deltas[n]));
    }
    return a;
}

// Compatibility of the mu-evolution with the isomonodromic A-matrices on one
// edge: || dL/dmu - (A_in L - L A_out) ||, with
// L = [[1, dz], [mu Delta_n/dz, 1]] and dL/dmu = [[0,0],[Delta_n/dz, 0]].
inline Real iso_compatibility(const PatternMap& pat, const ConstraintParams& par,
                              const LatticeIndex& from, const LatticeIndex& to, Complex mu) {
    int fam = step_family(to - from);
    if (fam == 0) throw DomainError("iso_compatibility: not a lattice edge");
    Complex dz = pat.value(to) - pat.value(from);
    if (dz == Complex(0.0)) throw SingularError("iso_compatibility: zero edge difference");
    Mat2 L{1.0, dz, mu * pat.deltas[fam] / dz, 1.0};
    Mat2 dL{0.0, 0.0, pat.deltas[fam] / dz, 0.0};
    Mat2 lhs = dL;
    Mat2 rhs = iso_A(pat, par, to, mu) * L - L * iso_A(pat, par, from, mu);
    return (lhs - rhs).frobenius();
}

// ---------------------------------------------------------------------------
// Discrete equations of Toda type.
// ---------------------------------------------------------------------------

// Coefficients of the Toda-type equations: the petal pair
// +-(e_{n+2} - e_{n+1}) (angle class n) carries A_n = Delta_{n+2} - Delta_{n+1},
// normalized to unit maximum.
inline std::array<Complex, 3> toda_coefficients(const DeltaTriple& d) {
    std::array<Complex, 3> a;
    for (int n = 1; n <= 3; ++n) a[n - 1] = d[n + 2] - d[n + 1];
    Real scale = std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
    if (scale < 1e-14L)
        throw SingularError("toda_coefficients: degenerate (equal) delta triple");
    for (auto& x : a) x /= scale;
    return a;
}

// | sum_n A_n (1/(z - z_n) + 1/(z - z_{n+3})) | over the six petal centers
// of the flower at an s = 0 vertex.
inline Real toda_hex_residual(const PatternMap& pat, const LatticeIndex& center) {
    if (sublattice_class(center) != 0) throw DomainError("toda_hex_residual: need s = 0");
    Complex z = pat.value(center);
    auto coef = toda_coefficients(pat.deltas);
    Complex sum(0.0);
    for (int n = 1; n <= 3; ++n) {
        LatticeIndex d = angle_pair_direction(n);
        sum += coef[n - 1] *
               (Complex(1.0) / (z - pat.value(center + d)) + Complex(1.0) / (z - pat.value(center - d)));
    }
    return std::abs(sum);
}

// | sum_n A_n / (w - w_n) | over the three HL-neighbors of an intersection
// point.
inline Real toda_vertex_residual(const PatternMap& pat, const LatticeIndex& v) {
    int s = sublattice_class(v);
    if (s != 1 && s != -1) throw DomainError("toda_vertex_residual: need s = +-1");
    Complex w = pat.value(v);
    auto coef = toda_coefficients(pat.deltas);
    Complex sum(0.0);
    for (int n = 1; n <= 3; ++n) sum += coef[n - 1] / (w - pat.value(hl_neighbor(v, n)));
    return std::abs(sum);
}

// Square-grid Toda equation on a slab m = m0, even/odd sublattice by parity
// of k + l:  1/(z - z_{++}) + 1/(z - z_{--}) = 1/(z - z_{+-}) + 1/(z - z_{-+}).
inline Real toda_square_residual(const PatternMap& pat, const LatticeIndex& p) {
    Complex z = pat.value(p);
    auto zat = [&](int dk, int dl) { return pat.value({p.k + dk, p.l + dl, p.m}); };
    Complex sum = Complex(1.0) / (z - zat(1, 1)) + Complex(1.0) / (z - zat(-1, -1)) -
                  Complex(1.0) / (z - zat(1, -1)) - Complex(1.0) / (z - zat(-1, 1));
    return std::abs(sum);
}

// ---------------------------------------------------------------------------
// Toda -> cross-ratio extensions (both sublattices from one).
// ---------------------------------------------------------------------------

// Square grid: given z on the even sublattice of a (k,l) box and one odd
// value, fills the odd sublattice so all quads [p, p+e_k, p+e_k+e_l, p+e_l]
// have cross-ratio q.  Keys are (k,l) pairs.
using GridMap = std::map<std::pair<int, int>, Complex>;

inline GridMap toda_extend_square(const GridMap& even, Complex q, std::pair<int, int> seed_pos,
                                  Complex seed_val) {
    GridMap all = even;
    all[seed_pos] = seed_val;
    // Around an even center z with diagonals z_NE etc., the simple-fraction
    // form of the cross-ratio equation q(z, w_E, z_NE, w_N) = q links
    // consecutive odd neighbors:
    //   1/(z - w_E) - q^{-1}/(z - w_N) + (q^{-1} - 1)/(z - z_NE) = 0,
    // rotated cyclically (each 90-degree turn inverts the ratio).
    auto solve_step = [&](Complex z, Complex diag, Complex w_known, Complex qq) -> Complex {
        // returns w_next with qq/(z - w_next) = 1/(z - w_known) + (qq-1)/(z - diag)
        Complex rhs = Complex(1.0) / (z - w_known) + (qq - 1.0L) / (z - diag);
        return z - qq / rhs;
    };
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& [pos, z] : even) {
            auto [k, l] = pos;
            // Neighbors E,N,W,S and diagonals NE,NW,SE,SW.
            std::array<std::pair<int, int>, 4> odd = {{{k + 1, l}, {k, l + 1}, {k - 1, l}, {k, l - 1}}};
            std::array<std::pair<int, int>, 4> diag = {
                {{k + 1, l + 1}, {k - 1, l + 1}, {k - 1, l - 1}, {k + 1, l - 1}}};
            std::array<Complex, 4> qq = {Complex(1.0) / q, q, Complex(1.0) / q, q};
            for (int i = 0; i < 4; ++i) {
                auto a = odd[i];
                auto b = odd[(i + 1) % 4];
                auto dpos = diag[i];
                if (!all.count(dpos)) continue;
                if (all.count(a) && !all.count(b)) {
                    all[b] = solve_step(z, all[dpos], all[a], qq[i]);
                    progress = true;
                } else if (!all.count(a) && all.count(b)) {
                    Complex rhs = qq[i] / (z - all[b]) - (qq[i] - 1.0L) / (z - all[dpos]);
                    all[a] = z - Complex(1.0) / rhs;
                    progress = true;
                }
            }
        }
    }
    return all;
}

// Dual Kagome lattice: given z on the center sublattice F(HL) of the strip
// and one intersection-point value, fills all s = +-1 vertices so the quads
// have the targets of `deltas`.
inline std::map<LatticeIndex, CPoint> toda_extend_hex(const PatternMap& centers,
                                                      const DeltaTriple& deltas,
                                                      const LatticeIndex& seed_pos,
                                                      const CPoint& seed_val) {
    std::map<LatticeIndex, CPoint> all;
    for (const auto& [p, v] : centers.values)
        if (sublattice_class(p) == 0) all[p] = v;
    if (std::abs(sublattice_class(seed_pos)) != 1)
        throw DomainError("toda_extend_hex: seed must be an intersection vertex");
    all[seed_pos] = seed_val;

    auto at = [&](const LatticeIndex& p) -> const CPoint& { return all.at(p); };
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& [c, zc] : centers.values) {
            if (sublattice_class(c) != 0) continue;
            auto loop = hexagon_loop(c);
            for (int i = 0; i < 6; ++i) {
                LatticeIndex va = loop[i], vb = loop[(i + 1) % 6];
                LatticeIndex petal = va + vb - c;
                if (!all.count(petal)) continue;
                // Quad [c, va, petal, vb]: target Delta_{fam(va-c)}/Delta_{fam(vb-c)}.
                Complex q = quad_target(deltas, step_family(va - c), step_family(vb - c));
                bool hava = all.count(va), havb = all.count(vb);
                if (hava == havb) continue;
                if (hava)
                    all[vb] = fourth_point(CPoint(q), zc, at(va), at(petal), 4);
                else
                    all[va] = fourth_point(CPoint(q), zc, at(petal), at(vb), 2);
                progress = true;
            }
        }
    }
    return all;
}

// ---------------------------------------------------------------------------
// Conformal Lax representation on the hexagonal lattice.
// ---------------------------------------------------------------------------

// Transition matrix of the conformal Lax representation for an edge of
// class E^H_f, i.e. the normal form of m_out -> m_in between the two
// neighbor charts (each chart sends the three neighbors of the vertex to
// 0, 1, infinity).  The trace-free family-1 form reproduces the chart
// composition on measured patterns to machine precision.
inline Mat2 conformal_lax_matrix(int family, Complex t, Complex s) {
    if (std::abs(s) < 1e-14L || std::abs(s - 1.0L) < 1e-14L)
        throw DomainError("conformal_lax_matrix: S in {0,1} is singular");
    switch (family) {
        case 1:
            return Mat2{1.0, (1.0L - s) / s, (t + s - 1.0L) / (s - 1.0L), -1.0};
        case 2:
            return Mat2{t * s, 1.0L - t * s, s * (1.0L + t * (s - 1.0L)) / (s - 1.0L), -t * s};
        case 3:
            return Mat2{1.0L - s, -1.0L + t * (1.0L / s - 1.0L) + s, -s, s - 1.0L};
        default:
            throw DomainError("conformal_lax_matrix: family must be 1..3");
    }
}

// Zero curvature of the conformal Lax matrices around one hexagon, with the
// spectral parameter s:  the ordered edge product is proportional to the
// identity.  Edges alternate orientation class around the loop, so every
// other matrix enters inverted; the two-sided form compares
// M6 M5 M4 against rho (M3 M2 M1)^{-1} with rho fitted by least squares.
// T in hexagon-loop edge order (families 1,2,3,1,2,3).
inline Real conformal_lax_residual(const std::array<Complex, 6>& t, Complex s) {
    auto factor = [&](int i) {
        Mat2 m = conformal_lax_matrix(i % 3 + 1, t[i], s);
        return (i % 2 == 0) ? m.inverse() : m;
    };
    Mat2 left = factor(5) * factor(4) * factor(3);
    Mat2 right = (factor(2) * factor(1) * factor(0)).inverse();
    Complex num = std::conj(right.m00) * left.m00 + std::conj(right.m01) * left.m01 +
                  std::conj(right.m10) * left.m10 + std::conj(right.m11) * left.m11;
    Real den = sqr(right.frobenius());
    if (den == 0.0L) throw SingularError("conformal_lax_residual: zero right product");
    Complex rho = num / den;
    Real nl = left.frobenius();
    if (nl == 0.0L) throw SingularError("conformal_lax_residual: zero left product");
    return (left - right * rho).frobenius() / nl;
}

// ---------------------------------------------------------------------------
// Whole-pattern sweeps.
// ---------------------------------------------------------------------------

inline std::vector<LatticeIndex> strip_centers(const PatternMap& pat) {
    std::vector<LatticeIndex> out;
    for (const auto& [p, v] : pat.values) {
        (void)v;
        if (sublattice_class(p) != 0) continue;
        Flower f = flower(p);
        bool full = true;
        for (int i = 0; i < 6 && full; ++i)
            if (!pat.has(f.petals[i]) || !pat.has(f.boundary[i])) full = false;
        if (full) out.push_back(p);
    }
    return out;
}

inline std::vector<LatticeIndex> strip_vertices(const PatternMap& pat) {
    std::vector<LatticeIndex> out;
    for (const auto& [p, v] : pat.values) {
        (void)v;
        int s = sublattice_class(p);
        if (s != 1 && s != -1) continue;
        bool full = true;
        for (int f = 1; f <= 3 && full; ++f)
            if (!pat.has(hl_neighbor(p, f))) full = false;
        if (full) out.push_back(p);
    }
    return out;
}

} // namespace hexcp
