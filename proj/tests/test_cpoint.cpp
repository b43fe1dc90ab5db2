#include <hexcp/circle.hpp>
#include <hexcp/cpoint.hpp>
#include <hexcp/mobius.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hexcp;

namespace {

std::mt19937 rng(20240811);

Complex random_complex(double scale = 2.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return Complex(d(rng), d(rng));
}

CPoint random_point() { return CPoint(random_complex()); }

Mobius random_mobius() {
    while (true) {
        Complex a = random_complex(), b = random_complex(), c = random_complex(),
                d = random_complex();
        if (std::abs(a * d - b * c) > 0.3) return Mobius(a, b, c, d);
    }
}

} // namespace

TEST_CASE("cross-ratio of collinear integers") {
    CPoint q = cross_ratio(CPoint(0.0), CPoint(1.0), CPoint(2.0), CPoint(3.0));
    REQUIRE(chordal(q, CPoint(Complex(-1.0 / 3.0))) < 1e-15);
}

TEST_CASE("cross-ratio with a point at infinity") {
    CPoint q = cross_ratio(CPoint(0.0), CPoint(1.0), CPoint::infinity(), CPoint(2.0));
    REQUIRE(chordal(q, CPoint(Complex(0.5))) < 1e-15);
}

TEST_CASE("kite quadrilateral of two unit circles at distance 1") {
    // Centers 0 and 1, intersection points (1 +- i sqrt(3))/2; angle pi/3.
    Complex p1(0.5, std::sqrt(3.0) / 2.0);
    Complex p2(0.5, -std::sqrt(3.0) / 2.0);
    CPoint q = cross_ratio(CPoint(0.0), CPoint(p1), CPoint(1.0), CPoint(p2));
    REQUIRE(chordal(q, CPoint(cis(-2.0 * kPi / 3.0))) < 1e-14);
}

TEST_CASE("cross-ratio rejects degenerate input") {
    REQUIRE_THROWS_AS(cross_ratio(CPoint(1.0), CPoint(1.0), CPoint(1.0), CPoint(2.0)), DomainError);
}

TEST_CASE("projective equality under rescaling") {
    for (int i = 0; i < 50; ++i) {
        std::array<CPoint, 4> z = {random_point(), random_point(), random_point(), random_point()};
        std::array<CPoint, 4> w = z;
        for (auto& p : w) {
            Complex s = random_complex();
            if (std::abs(s) < 0.1) s += 1.0;
            p = CPoint(p.a * s, p.b * s);
        }
        CPoint q1 = cross_ratio(z[0], z[1], z[2], z[3]);
        CPoint q2 = cross_ratio(w[0], w[1], w[2], w[3]);
        REQUIRE(chordal(q1, q2) < 1e-12);
    }
}

TEST_CASE("fourth point inverts the cross-ratio, every slot") {
    REQUIRE(chordal(fourth_point(CPoint(Complex(-1.0 / 3.0)), CPoint(0.0), CPoint(1.0), CPoint(2.0), 4),
                    CPoint(3.0)) < 1e-14);
    REQUIRE(chordal(fourth_point(CPoint(0.5), CPoint(0.0), CPoint(1.0), CPoint::infinity(), 4),
                    CPoint(2.0)) < 1e-14);
    for (int i = 0; i < 100; ++i) {
        std::array<CPoint, 4> z = {random_point(), random_point(), random_point(), random_point()};
        bool distinct = true;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (chordal(z[a], z[b]) < 1e-3) distinct = false;
        if (!distinct) continue;
        CPoint q = cross_ratio(z[0], z[1], z[2], z[3]);
        for (int slot = 1; slot <= 4; ++slot) {
            std::array<CPoint, 3> rest;
            int idx = 0;
            for (int j = 0; j < 4; ++j)
                if (j != slot - 1) rest[idx++] = z[j];
            CPoint recovered = fourth_point(q, rest[0], rest[1], rest[2], slot);
            REQUIRE(chordal(recovered, z[slot - 1]) < 1e-10);
        }
    }
}

TEST_CASE("multi-ratio values") {
    std::array<CPoint, 6> z = {CPoint(0.0), CPoint(1.0), CPoint(2.0),
                               CPoint(3.0), CPoint(4.0), CPoint(5.0)};
    REQUIRE(chordal(multi_ratio(z), CPoint(Complex(-0.2))) < 1e-14);

    std::array<CPoint, 6> hex;
    for (int j = 0; j < 6; ++j) hex[j] = CPoint(cis(kPi * j / 3.0));
    REQUIRE(chordal(multi_ratio(hex), CPoint(Complex(-1.0))) < 1e-14);
}

TEST_CASE("multi-ratio equals -q(z1..z4)/q(z4,z5,z6,z1)") {
    for (int i = 0; i < 100; ++i) {
        std::array<CPoint, 6> z;
        for (auto& p : z) p = random_point();
        bool distinct = true;
        for (int a = 0; a < 6; ++a)
            for (int b = a + 1; b < 6; ++b)
                if (chordal(z[a], z[b]) < 1e-3) distinct = false;
        if (!distinct) continue;
        Complex m = multi_ratio(z).value();
        Complex q1 = cross_ratio(z[0], z[1], z[2], z[3]).value();
        Complex q2 = cross_ratio(z[3], z[4], z[5], z[0]).value();
        REQUIRE(std::abs(m + q1 / q2) < 1e-12);
    }
}

TEST_CASE("mobius_from_pairs interpolates and cross-ratio is invariant") {
    std::array<CPoint, 3> std3 = {CPoint(0.0), CPoint(1.0), CPoint::infinity()};
    Mobius id = mobius_from_pairs(std3, std3);
    REQUIRE(chordal(id.apply(CPoint(Complex(2.0, 1.0))), CPoint(Complex(2.0, 1.0))) < 1e-14);

    std::array<CPoint, 3> dst = {CPoint(1.0), CPoint::infinity(), CPoint(0.0)};
    Mobius cyc = mobius_from_pairs(std3, dst);
    // z -> 1/(1-z): check at z = 2.
    REQUIRE(chordal(cyc.apply(CPoint(2.0)), CPoint(-1.0)) < 1e-14);

    for (int i = 0; i < 50; ++i) {
        Mobius m = random_mobius();
        std::array<CPoint, 4> z = {random_point(), random_point(), random_point(), random_point()};
        bool distinct = true;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (chordal(z[a], z[b]) < 1e-3) distinct = false;
        if (!distinct) continue;
        CPoint q0 = cross_ratio(z[0], z[1], z[2], z[3]);
        CPoint q1 = cross_ratio(m.apply(z[0]), m.apply(z[1]), m.apply(z[2]), m.apply(z[3]));
        REQUIRE(chordal(q0, q1) < 1e-11);
    }
}

TEST_CASE("mobius_from_pairs rejects coincident points") {
    std::array<CPoint, 3> bad = {CPoint(0.0), CPoint(0.0), CPoint(1.0)};
    std::array<CPoint, 3> ok = {CPoint(0.0), CPoint(1.0), CPoint(2.0)};
    REQUIRE_THROWS_AS(mobius_from_pairs(bad, ok), DomainError);
}

TEST_CASE("circumcircle of symmetric triples") {
    Circle c = circumcircle(CPoint(1.0), CPoint(Complex(0.0, 1.0)), CPoint(-1.0));
    REQUIRE_FALSE(c.is_line);
    REQUIRE(std::abs(c.center) < 1e-14);
    REQUIRE(std::abs(c.radius - 1.0) < 1e-14);

    Circle l = circumcircle(CPoint(0.0), CPoint(1.0), CPoint(2.0));
    REQUIRE(l.is_line);

    Circle c2 = circumcircle(CPoint(0.0), CPoint(1.0), CPoint(Complex(1.0, 1.0)));
    REQUIRE_FALSE(c2.is_line);
    for (Complex z : {Complex(0.0), Complex(1.0), Complex(1.0, 1.0)})
        REQUIRE(std::abs(std::abs(z - c2.center) - c2.radius) < 1e-13);
}

TEST_CASE("reflect_in_circle basics and involution") {
    Circle unit_at_2 = Circle::proper(Complex(2.0), 1.0);
    REQUIRE(chordal(reflect_in_circle(CPoint::infinity(), unit_at_2), CPoint(2.0)) < 1e-14);
    REQUIRE(chordal(reflect_in_circle(CPoint(0.0), unit_at_2), CPoint(1.5)) < 1e-14);

    for (int i = 0; i < 50; ++i) {
        CPoint p = random_point();
        CPoint r2 = reflect_in_circle(reflect_in_circle(p, unit_at_2), unit_at_2);
        REQUIRE(chordal(p, r2) < 1e-12);
    }
    // Fixed points on the circle.
    for (int i = 0; i < 12; ++i) {
        CPoint on = CPoint(Complex(2.0) + cis(i * 0.5));
        REQUIRE(chordal(reflect_in_circle(on, unit_at_2), on) < 1e-12);
    }
    // Lines reflect Euclideanly and fix infinity.
    Circle line = circumcircle(CPoint(0.0), CPoint(1.0), CPoint(2.0));
    REQUIRE(chordal(reflect_in_circle(CPoint(Complex(0.0, 1.0)), line), CPoint(Complex(0.0, -1.0))) <
            1e-13);
    REQUIRE(reflect_in_circle(CPoint::infinity(), line).is_infinite());
}
