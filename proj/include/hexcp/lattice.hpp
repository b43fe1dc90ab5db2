#pragma once

#include <hexcp/common.hpp>

#include <array>
#include <compare>
#include <cstdlib>
#include <vector>

namespace hexcp {

// Vertex of Z^3 (equivalently of the strip lattice QL when |k+l+m| <= 1).
// The strip normalization assigns a unique triple to every vertex of the
// quadrilateral lattice: s = k+l+m = 0 are circle centers, s = +-1 are
// intersection points.  The mod-3 labelling of the triangular lattice is
// recovered through embed_reference.
struct LatticeIndex {
    int k = 0, l = 0, m = 0;

    friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;

    LatticeIndex operator+(const LatticeIndex& o) const { return {k + o.k, l + o.l, m + o.m}; }
    LatticeIndex operator-(const LatticeIndex& o) const { return {k - o.k, l - o.l, m - o.m}; }
    LatticeIndex operator-() const { return {-k, -l, -m}; }
    LatticeIndex operator*(int s) const { return {k * s, l * s, m * s}; }
};

inline int sublattice_class(const LatticeIndex& p) { return p.k + p.l + p.m; }

// Unit steps of the three edge families E_1, E_2, E_3 of Z^3.
inline LatticeIndex unit_step(int family) {
    switch (family) {
        case 1: return {1, 0, 0};
        case 2: return {0, 1, 0};
        case 3: return {0, 0, 1};
        default: throw DomainError("unit_step: family must be 1..3");
    }
}

// Family of the edge (p, p+d) with d = +-e_n; 0 if d is not a unit step.
inline int step_family(const LatticeIndex& d) {
    if (std::abs(d.k) + std::abs(d.l) + std::abs(d.m) != 1) return 0;
    if (d.k != 0) return 1;
    if (d.l != 0) return 2;
    return 3;
}

// Reference position k + l*omega + m*omega^2 in the triangular lattice.
inline Complex embed_reference(const LatticeIndex& p) {
    return Real(p.k) + Real(p.l) * kOmega + Real(p.m) * kOmega2;
}

enum class RegionKind {
    StripHalfPlane, // H_H: |k+l+m| <= 1, m <= 0
    StripBox,       // |k+l+m| <= 1, bounding box only
    SectorStrip,    // Q_H: |k+l+m| <= 1, k >= 0, l >= 0, m <= 0
    SectorBox,      // Q: k >= 0, l >= 0, m <= 0 (all sublattice classes)
    SlabM0,         // m == 0, k >= 0, l >= 0
    FullBox         // all of Z^3 within the box
};

struct Region {
    RegionKind kind = RegionKind::SectorBox;
    int n = 8; // size bound: every |coordinate| <= n

    bool contains(const LatticeIndex& p) const {
        if (std::abs(p.k) > n || std::abs(p.l) > n || std::abs(p.m) > n) return false;
        int s = sublattice_class(p);
        switch (kind) {
            case RegionKind::StripHalfPlane: return std::abs(s) <= 1 && p.m <= 0;
            case RegionKind::StripBox: return std::abs(s) <= 1;
            case RegionKind::SectorStrip: return std::abs(s) <= 1 && p.k >= 0 && p.l >= 0 && p.m <= 0;
            case RegionKind::SectorBox: return p.k >= 0 && p.l >= 0 && p.m <= 0;
            case RegionKind::SlabM0: return p.m == 0 && p.k >= 0 && p.l >= 0;
            case RegionKind::FullBox: return true;
        }
        return false;
    }

    // All member indices, sorted (deterministic sweep order).
    std::vector<LatticeIndex> points() const {
        std::vector<LatticeIndex> out;
        for (int k = -n; k <= n; ++k)
            for (int l = -n; l <= n; ++l)
                for (int m = -n; m <= n; ++m)
                    if (contains({k, l, m})) out.push_back({k, l, m});
        return out;
    }
};

struct NeighborEdge {
    LatticeIndex to;
    int family;
    int sign; // +1 for p+e_n, -1 for p-e_n
};

inline std::vector<NeighborEdge> neighbors(const LatticeIndex& p, const Region& region) {
    if (!region.contains(p)) throw DomainError("neighbors: point outside region");
    std::vector<NeighborEdge> out;
    for (int n = 1; n <= 3; ++n)
        for (int sign : {+1, -1}) {
            LatticeIndex q = p + unit_step(n) * sign;
            if (region.contains(q)) out.push_back({q, n, sign});
        }
    return out;
}

// Petal pair of angle class n: directions +-(e_{n+2} - e_{n+1}).  The shared
// intersection points of center and petal lie on an edge of class E^H_n.
inline LatticeIndex angle_pair_direction(int n) {
    switch (n) {
        case 1: return {0, -1, 1};  // e3 - e2
        case 2: return {1, 0, -1};  // e1 - e3
        case 3: return {-1, 1, 0};  // e2 - e1
        default: throw DomainError("angle_pair_direction: n must be 1..3");
    }
}

// One flower: the six petal centers (neighbors-of-neighbors on the s=0
// sublattice) and the six boundary vertices (s=+-1), both counterclockwise in
// embed_reference coordinates.  Petal 1 sits in the +E1-E3 direction.
struct Flower {
    LatticeIndex center;
    std::array<LatticeIndex, 6> petals;
    std::array<LatticeIndex, 6> boundary;
};

inline const std::array<LatticeIndex, 6>& petal_directions() {
    static const std::array<LatticeIndex, 6> dirs = {{
        {1, 0, -1}, {0, 1, -1}, {-1, 1, 0}, {-1, 0, 1}, {0, -1, 1}, {1, -1, 0},
    }};
    return dirs;
}

inline const std::array<LatticeIndex, 6>& vertex_directions() {
    static const std::array<LatticeIndex, 6> dirs = {{
        {1, 0, 0}, {0, 0, -1}, {0, 1, 0}, {-1, 0, 0}, {0, 0, 1}, {0, -1, 0},
    }};
    return dirs;
}

inline Flower flower(const LatticeIndex& center) {
    if (sublattice_class(center) != 0) throw DomainError("flower: center must have k+l+m = 0");
    Flower f;
    f.center = center;
    for (int i = 0; i < 6; ++i) {
        f.petals[i] = center + petal_directions()[i];
        f.boundary[i] = center + vertex_directions()[i];
    }
    return f;
}

// Corners p + (kappa, lambda, -mu), kappa,lambda,mu in {0,1}, of the
// elementary hexahedron H(p1+1/2, p2+1/2, p3-1/2).
inline std::array<LatticeIndex, 8> hexahedron(const LatticeIndex& p) {
    return {{p,
             p + LatticeIndex{1, 0, 0},
             p + LatticeIndex{0, 1, 0},
             p + LatticeIndex{0, 0, -1},
             p + LatticeIndex{1, 1, 0},
             p + LatticeIndex{1, 0, -1},
             p + LatticeIndex{0, 1, -1},
             p + LatticeIndex{1, 1, -1}}};
}

struct PathStep {
    LatticeIndex from;
    LatticeIndex to;
    int family;
};

// Canonical monotone path: all k-steps, then l-steps, then m-steps.
inline std::vector<PathStep> path_between(const LatticeIndex& a, const LatticeIndex& b) {
    std::vector<PathStep> out;
    LatticeIndex cur = a;
    auto walk = [&](int family, int delta) {
        int sign = delta >= 0 ? 1 : -1;
        for (int i = 0; i < std::abs(delta); ++i) {
            LatticeIndex next = cur + unit_step(family) * sign;
            out.push_back({cur, next, family});
            cur = next;
        }
    };
    walk(1, b.k - a.k);
    walk(2, b.l - a.l);
    walk(3, b.m - a.m);
    return out;
}

inline std::vector<PathStep> path_to(const LatticeIndex& p) { return path_between({0, 0, 0}, p); }

// Same endpoints, reversed coordinate order (m, then l, then k).
inline std::vector<PathStep> path_between_alt(const LatticeIndex& a, const LatticeIndex& b) {
    std::vector<PathStep> out;
    LatticeIndex cur = a;
    auto walk = [&](int family, int delta) {
        int sign = delta >= 0 ? 1 : -1;
        for (int i = 0; i < std::abs(delta); ++i) {
            LatticeIndex next = cur + unit_step(family) * sign;
            out.push_back({cur, next, family});
            cur = next;
        }
    };
    walk(3, b.m - a.m);
    walk(2, b.l - a.l);
    walk(1, b.k - a.k);
    return out;
}

} // namespace hexcp
