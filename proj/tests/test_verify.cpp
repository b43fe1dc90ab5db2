#include <hexcp/builders.hpp>
#include <hexcp/radii.hpp>
#include <hexcp/verify.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hexcp;

namespace {

const std::array<Complex, 3> kLambdaSamples = {Complex(0.3), Complex(0.0, 0.7),
                                               Complex(1.0, 0.5)};
const std::array<Complex, 2> kMuSamples = {Complex(0.4), Complex(0.0, 2.0)};

Real max_zero_curvature(const PatternMap& pat) {
    Real worst = 0.0L;
    for (const Quad& q : enumerate_quads(pat)) {
        bool usable = true;
        for (int i = 0; i < 4 && usable; ++i) {
            const CPoint& a = pat.at(q.corner[i]);
            const CPoint& b = pat.at(q.corner[(i + 1) % 4]);
            if (a.is_infinite() || b.is_infinite() || chordal(a, b) < 1e-13L) usable = false;
        }
        if (!usable) continue;
        for (Complex lambda : kLambdaSamples)
            worst = std::max(worst, quad_zero_curvature(pat, q, lambda));
    }
    return worst;
}

Real max_iso_compat(const PatternMap& pat, const ConstraintParams& par) {
    Real worst = 0.0L;
    int evaluated = 0;
    for (const auto& [p, v] : pat.values) {
        (void)v;
        for (int n = 1; n <= 3; ++n) {
            LatticeIndex q = p + unit_step(n);
            if (!pat.has(q)) continue;
            bool ok = pat.has_finite(p) && pat.has_finite(q);
            for (int f = 1; f <= 3 && ok; ++f) {
                for (const LatticeIndex& e : {p + unit_step(f), p - unit_step(f), q + unit_step(f),
                                              q - unit_step(f)})
                    if (!pat.has_finite(e)) ok = false;
            }
            if (!ok) continue;
            if (chordal(pat.at(p), pat.at(q)) < 1e-13L) continue;
            try {
                for (Complex mu : kMuSamples)
                    worst = std::max(worst, iso_compatibility(pat, par, p, q, mu));
                ++evaluated;
            } catch (const SingularError&) {
            }
        }
    }
    REQUIRE(evaluated > 10);
    return worst;
}

struct TodaSweep {
    Real hex = 0.0L, vertex = 0.0L;
    int hexes = 0, vertices = 0;
};

TodaSweep toda_sweep(const PatternMap& pat) {
    TodaSweep out;
    for (const LatticeIndex& c : strip_centers(pat)) {
        bool usable = pat.has_finite(c);
        for (int i = 0; i < 6 && usable; ++i) {
            LatticeIndex petal = flower(c).petals[i];
            if (!pat.has_finite(petal) || chordal(pat.at(c), pat.at(petal)) < 1e-12L)
                usable = false;
        }
        if (!usable) continue;
        out.hex = std::max(out.hex, toda_hex_residual(pat, c));
        ++out.hexes;
    }
    for (const LatticeIndex& v : strip_vertices(pat)) {
        bool usable = pat.has_finite(v);
        for (int f = 1; f <= 3 && usable; ++f) {
            LatticeIndex w = hl_neighbor(v, f);
            if (!pat.has_finite(w) || chordal(pat.at(v), pat.at(w)) < 1e-12L) usable = false;
        }
        if (!usable) continue;
        out.vertex = std::max(out.vertex, toda_vertex_residual(pat, v));
        ++out.vertices;
    }
    return out;
}

} // namespace

TEST_CASE("lax_edge structure") {
    PatternMap pat = build_z3(2);
    LatticeIndex a{1, 1, -1}, b{2, 1, -1};
    Complex lambda(0.7);
    Mat2 l0 = lax_edge(pat, a, b, Complex(0.0));
    REQUIRE((l0 - Mat2::identity()).frobenius() < 1e-15);

    Mat2 l = lax_edge(pat, a, b, lambda);
    // Twisted symmetry: L(-lambda) = sigma3 L(lambda) sigma3.
    Mat2 lm = lax_edge(pat, a, b, -lambda);
    Mat2 twisted{l.m00, -l.m01, -l.m10, l.m11};
    REQUIRE((lm - twisted).frobenius() < 1e-15);
    // det = 1 - lambda^2 Delta_1.
    REQUIRE(std::abs(l.det() - (Complex(1.0) - lambda * lambda * pat.deltas[1])) < 1e-13);
    // The degenerate central edges of z^3 are rejected.
    REQUIRE_THROWS_AS(lax_edge(pat, {0, 0, 0}, {1, 0, 0}, lambda), SingularError);
}

TEST_CASE("zero curvature on builder outputs") {
    REQUIRE(max_zero_curvature(build_z3(3)) < 1e-11);
    REQUIRE(max_zero_curvature(build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 6,
                                         RegionKind::SectorBox})) < 1e-9);
    REQUIRE(max_zero_curvature(build_zc({1.2L, AngleTriple(1.1L, 0.7L), 5,
                                         RegionKind::SectorBox})) < 1e-9);
    REQUIRE(max_zero_curvature(build_z2(AngleTriple::isotropic(), 5)) < 1e-9);
    REQUIRE(max_zero_curvature(build_log(5)) < 1e-9);
    REQUIRE(max_zero_curvature(layout_from_radii(doyle_radii(0.3L, 0.1L, 4),
                                                 AngleTriple(1.1L, 0.6L), 4)) < 1e-9);
}

TEST_CASE("zero curvature detects corruption") {
    PatternMap pat = build_z3(2);
    pat.values[{1, 0, 0}] = CPoint(pat.value({1, 0, 0}) + Complex(0.01L));
    REQUIRE(max_zero_curvature(pat) > 1e-4);
}

TEST_CASE("wave function path independence") {
    PatternMap pat = build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 6, RegionKind::SectorBox});
    std::mt19937 rng(5150);
    std::uniform_int_distribution<int> d(0, 5);
    for (Complex lambda : kLambdaSamples) {
        REQUIRE((wave_function(pat, {0, 0, 0}, {0, 0, 0}, lambda) - Mat2::identity()).frobenius() <
                1e-15);
        for (int trial = 0; trial < 20; ++trial) {
            LatticeIndex p{d(rng), d(rng), -d(rng)};
            Mat2 a = wave_function(pat, {0, 0, 0}, p, lambda, false);
            Mat2 b = wave_function(pat, {0, 0, 0}, p, lambda, true);
            REQUIRE((a - b).frobenius() < 1e-9);
        }
    }
    // A single step is the edge matrix itself.
    Mat2 one = wave_function(pat, {0, 0, 0}, {1, 0, 0}, Complex(0.3));
    REQUIRE((one - lax_edge(pat, {0, 0, 0}, {1, 0, 0}, Complex(0.3))).frobenius() < 1e-15);
}

TEST_CASE("Sym formula") {
    PatternMap pat = build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 6, RegionKind::SectorBox});
    PatternMap dual = dualize(pat, {0, 0, 0}, Complex(0.0));

    // Single factor: derivative entries are exactly the first differences.
    REQUIRE(sym_check(pat, dual, {0, 0, 0}, {1, 0, 0}) < 1e-15);
    // Deeper points: telescoping against the integrated dual.
    REQUIRE(sym_check(pat, dual, {0, 0, 0}, {3, 2, -2}) < 1e-10);
    REQUIRE(sym_check(pat, dual, {0, 0, 0}, {5, 4, -5}) < 1e-10);

    // Finite differences of the wave function agree with the analytic
    // derivative to O(h^2).
    Mat2 fd = wave_derivative_fd(pat, {0, 0, 0}, {3, 2, -2});
    Complex z_diff = pat.value({3, 2, -2}) - pat.value({0, 0, 0});
    Complex zs_diff = dual.value({3, 2, -2}) - dual.value({0, 0, 0});
    REQUIRE(std::abs(fd.m01 - z_diff) < 1e-6);
    REQUIRE(std::abs(fd.m10 - zs_diff) < 1e-6);
}

TEST_CASE("isomonodromic A-matrix structure") {
    PatternMap pat = build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 5, RegionKind::SectorBox});
    ConstraintParams par = ConstraintParams::power(2.0L / 3.0L);
    LatticeIndex p{2, 1, -2};
    // tr B^(n) = (k, l, m) with vanishing a-parameters: check via residues.
    for (int n = 1; n <= 3; ++n) {
        Complex pole = Complex(1.0) / pat.deltas[n];
        Complex eps(1e-7L);
        Mat2 near = iso_A(pat, par, p, pole + eps);
        Complex tr = (near.m00 + near.m11) * eps; // residue trace
        Complex expect = n == 1 ? Complex(Real(p.k)) : n == 2 ? Complex(Real(p.l))
                                                              : Complex(Real(p.m));
        REQUIRE(std::abs(tr - expect) < 1e-5);
    }
    REQUIRE_THROWS_AS(iso_A(pat, par, p, Complex(0.0)), DomainError);
    REQUIRE_THROWS_AS(iso_A(pat, par, p, Complex(1.0) / pat.deltas[2]), DomainError);
}

TEST_CASE("isomonodromic compatibility on z^c, z^2, log and the identity") {
    REQUIRE(max_iso_compat(build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 6,
                                     RegionKind::SectorBox}),
                           ConstraintParams::power(2.0L / 3.0L)) < 1e-9);
    REQUIRE(max_iso_compat(build_zc({1.0L, AngleTriple::isotropic(), 6, RegionKind::SectorBox}),
                           ConstraintParams::power(1.0L)) < 1e-11);
    REQUIRE(max_iso_compat(build_zc({0.8L, AngleTriple(1.3L, 0.9L), 5, RegionKind::SectorBox}),
                           ConstraintParams::power(0.8L)) < 1e-9);
    REQUIRE(max_iso_compat(build_z2(AngleTriple::isotropic(), 5), ConstraintParams::power(2.0L)) <
            1e-8);
    REQUIRE(max_iso_compat(build_log(5), ConstraintParams::logarithm()) < 1e-8);
}

TEST_CASE("iso compatibility detects constraint violations") {
    // The linear map satisfies the cross-ratio system for these deltas but
    // not the c = 2/3 constraint.
    PatternMap pat;
    pat.deltas = angles_to_deltas(AngleTriple::isotropic());
    pat.region = Region{RegionKind::SectorBox, 4};
    for (const LatticeIndex& p : pat.region.points()) pat.values[p] = CPoint(embed_reference(p));
    REQUIRE(max_iso_compat(pat, ConstraintParams::power(2.0L / 3.0L)) > 1e-3);
}

TEST_CASE("Toda residuals on builder outputs") {
    auto s1 = toda_sweep(strip_restrict(build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 7,
                                                  RegionKind::SectorBox})));
    REQUIRE(s1.hexes > 3);
    REQUIRE(s1.vertices > 10);
    REQUIRE(s1.hex < 1e-9);
    REQUIRE(s1.vertex < 1e-9);

    auto s2 = toda_sweep(strip_restrict(build_zc({1.1L, AngleTriple(0.9L, 1.4L), 7,
                                                  RegionKind::SectorBox})));
    REQUIRE(s2.hex < 1e-9);
    REQUIRE(s2.vertex < 1e-9);

    auto s3 = toda_sweep(build_z3(4));
    REQUIRE(s3.hexes > 10);
    REQUIRE(s3.hex < 1e-10);
    REQUIRE(s3.vertex < 1e-10);

    // Doyle layouts are circle patterns too.
    auto s4 = toda_sweep(layout_from_radii(doyle_radii(0.3L, 0.1L, 4), AngleTriple::isotropic(), 4));
    REQUIRE(s4.hex < 1e-9);
    REQUIRE(s4.vertex < 1e-9);
}

TEST_CASE("Toda residual detects perturbations") {
    PatternMap pat = build_z3(3);
    pat.values[{1, 0, -1}] = CPoint(pat.value({1, 0, -1}) + Complex(0.01L));
    REQUIRE(toda_hex_residual(pat, {0, 0, 0}) > 1e-5);
}

TEST_CASE("square-grid Toda on the m = 0 slab") {
    PatternMap pat = build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 7, RegionKind::SectorBox});
    int checked = 0;
    for (const auto& [p, v] : pat.values) {
        (void)v;
        if (p.m != 0 || p.k < 1 || p.l < 1 || p.k > 5 || p.l > 5) continue;
        REQUIRE(toda_square_residual(pat, p) < 1e-9);
        ++checked;
    }
    REQUIRE(checked > 10);

    // The identity map satisfies it exactly by symmetry.
    PatternMap lin;
    lin.deltas = angles_to_deltas(AngleTriple::isotropic());
    lin.region = Region{RegionKind::SectorBox, 4};
    for (const LatticeIndex& p : lin.region.points()) lin.values[p] = CPoint(embed_reference(p));
    REQUIRE(toda_square_residual(lin, {2, 2, 0}) < 1e-15);

    lin.values[{3, 3, 0}] = CPoint(embed_reference({3, 3, 0}) + Complex(0.05L));
    REQUIRE(toda_square_residual(lin, {2, 2, 0}) > 1e-4);
}

TEST_CASE("square-grid Toda extension round trip") {
    PatternMap pat = build_zc({0.9L, AngleTriple::isotropic(), 6, RegionKind::SectorBox});
    // Slab m = 0 as a grid map; delete the odd sublattice and re-extend.
    GridMap even;
    Complex seed;
    bool have_seed = false;
    for (const auto& [p, v] : pat.values) {
        if (p.m != 0) continue;
        if ((p.k + p.l) % 2 == 0) even[{p.k, p.l}] = v.value();
        if (p.k == 1 && p.l == 0) {
            seed = v.value();
            have_seed = true;
        }
    }
    REQUIRE(have_seed);
    Complex q = quad_target(pat.deltas, 1, 2);
    GridMap all = toda_extend_square(even, q, {1, 0}, seed);
    int compared = 0;
    for (const auto& [p, v] : pat.values) {
        if (p.m != 0 || (p.k + p.l) % 2 == 0) continue;
        auto it = all.find({p.k, p.l});
        REQUIRE(it != all.end());
        REQUIRE(std::abs(it->second - v.value()) < 1e-8);
        ++compared;
    }
    REQUIRE(compared > 10);

    // The extension has constant cross-ratio q on all grid quads.
    for (const auto& [pos, z] : all) {
        auto [k, l] = pos;
        if (!all.count({k + 1, l}) || !all.count({k + 1, l + 1}) || !all.count({k, l + 1})) continue;
        Complex meas = cross_ratio(CPoint(z), CPoint(all.at({k + 1, l})),
                                   CPoint(all.at({k + 1, l + 1})), CPoint(all.at({k, l + 1})))
                           .value();
        REQUIRE(std::abs(meas - q) < 1e-8);
    }

    // The other sublattice of the extension satisfies the same Toda equation.
    int odd_checked = 0;
    for (const auto& [pos, z] : all) {
        auto [k, l] = pos;
        if ((k + l) % 2 == 0) continue;
        bool full = all.count({k + 1, l + 1}) && all.count({k - 1, l - 1}) &&
                    all.count({k + 1, l - 1}) && all.count({k - 1, l + 1});
        if (!full) continue;
        Complex sum = Complex(1.0) / (z - all.at({k + 1, l + 1})) +
                      Complex(1.0) / (z - all.at({k - 1, l - 1})) -
                      Complex(1.0) / (z - all.at({k + 1, l - 1})) -
                      Complex(1.0) / (z - all.at({k - 1, l + 1}));
        REQUIRE(std::abs(sum) < 1e-8);
        ++odd_checked;
    }
    REQUIRE(odd_checked > 5);
}

TEST_CASE("hexagonal Toda extension round trip") {
    PatternMap pat = strip_restrict(build_zc({0.75L, AngleTriple::isotropic(), 6,
                                              RegionKind::SectorBox}));
    PatternMap centers = pat;
    for (auto it = centers.values.begin(); it != centers.values.end();)
        if (sublattice_class(it->first) != 0)
            it = centers.values.erase(it);
        else
            ++it;
    auto all = toda_extend_hex(centers, pat.deltas, {1, 0, 0}, pat.at({1, 0, 0}));
    int compared = 0;
    for (const auto& [p, v] : pat.values) {
        if (sublattice_class(p) == 0) continue;
        auto it = all.find(p);
        if (it == all.end()) continue;
        REQUIRE(chordal(it->second, v) < 1e-8);
        ++compared;
    }
    REQUIRE(compared > 15);
}

TEST_CASE("conformal Lax zero curvature") {
    // Constant solution T = -2.
    std::array<Complex, 6> t2;
    t2.fill(Complex(-2.0));
    for (Complex s : {cis(-kPi / 3.0L), Complex(2.0), Complex(1.0, 1.0), Complex(0.0, 10.0)})
        REQUIRE(conformal_lax_residual(t2, s) < 1e-11);

    // Measured T's from a built pattern, multiple S (spectral parameter).
    PatternMap pat = strip_restrict(build_zc({2.0L / 3.0L, AngleTriple::isotropic(), 7,
                                              RegionKind::SectorBox}));
    TSData ts = compute_TS(pat);
    int hexes = 0;
    for (const LatticeIndex& c : pat.region.points()) {
        if (sublattice_class(c) != 0) continue;
        auto loop = hexagon_loop(c);
        bool full = true;
        for (int i = 0; i < 6; ++i)
            if (!ts.t.count(EdgeKey(loop[i], loop[(i + 1) % 6]))) full = false;
        if (!full) continue;
        auto t = hexagon_ts(ts, c);
        for (Complex s : {Complex(2.0), Complex(1.0, 1.0), Complex(0.0, 10.0)})
            REQUIRE(conformal_lax_residual(t, s) < 1e-9);
        ++hexes;
    }
    REQUIRE(hexes > 3);

    // Random T's are rejected.
    std::array<Complex, 6> bad = {Complex(-2.0), Complex(-1.0), Complex(-3.0),
                                  Complex(-0.5), Complex(-1.7), Complex(-2.2)};
    REQUIRE(conformal_lax_residual(bad, Complex(2.0)) > 1e-3);
}
