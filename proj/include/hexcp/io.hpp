#pragma once

#include <hexcp/circle.hpp>
#include <hexcp/conformal.hpp>
#include <hexcp/pattern.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace hexcp {

inline constexpr int kFormatVersion = 1;

struct IndexedCircle {
    LatticeIndex center_index;
    Circle circle;
};

// Circles of a strip pattern.  Kite patterns take the stored s = 0 value as
// center and the neighbor distance as radius; patterns without center values
// fall back to the circumcircle of three hexagon vertices, with the other
// three checked concyclic.  Circles through infinity (lines) are skipped.
inline std::vector<IndexedCircle> extract_circles(const PatternMap& pat, double tol = 1e-7) {
    std::vector<IndexedCircle> out;
    for (const auto& [p, v] : pat.values) {
        if (sublattice_class(p) != 0) continue;
        auto loop = hexagon_loop(p);
        std::vector<CPoint> verts;
        for (const auto& w : loop)
            if (pat.has(w)) verts.push_back(pat.at(w));
        if (verts.size() < 3) continue;

        if (!v.is_infinite()) {
            Complex c = v.value();
            double lo = 1e300, hi = 0.0;
            bool all_finite = true;
            for (const CPoint& w : verts) {
                if (w.is_infinite()) {
                    all_finite = false;
                    break;
                }
                double d = std::abs(w.value() - c);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            if (!all_finite) continue;
            if (hi - lo > tol * std::max(1.0, hi))
                throw InconsistentError("extract_circles: vertices not equidistant from center");
            out.push_back({p, Circle::proper(c, 0.5 * (lo + hi))});
            continue;
        }
        // Center at infinity: the six vertices lie on a line; skip.
        Circle circ = circumcircle(verts[0], verts[1], verts[2]);
        if (circ.is_line) continue;
        bool ok = true;
        for (const CPoint& w : verts) {
            if (w.is_infinite()) { ok = false; break; }
            double err = std::abs(std::abs(w.value() - circ.center) - circ.radius);
            if (err > tol * std::max((Real)1.0L, circ.radius))
                throw InconsistentError("extract_circles: hexagon vertices not concyclic");
        }
        if (ok) out.push_back({p, circ});
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON pattern document.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string region_name(RegionKind k) {
    switch (k) {
        case RegionKind::StripHalfPlane: return "strip_half_plane";
        case RegionKind::StripBox: return "strip_box";
        case RegionKind::SectorStrip: return "sector_strip";
        case RegionKind::SectorBox: return "sector_box";
        case RegionKind::SlabM0: return "slab_m0";
        case RegionKind::FullBox: return "full_box";
    }
    throw DomainError("region_name: unknown kind");
}

inline RegionKind region_kind(const std::string& s) {
    if (s == "strip_half_plane") return RegionKind::StripHalfPlane;
    if (s == "strip_box") return RegionKind::StripBox;
    if (s == "sector_strip") return RegionKind::SectorStrip;
    if (s == "sector_box") return RegionKind::SectorBox;
    if (s == "slab_m0") return RegionKind::SlabM0;
    if (s == "full_box") return RegionKind::FullBox;
    throw DomainError("region_kind: unknown region name " + s);
}

} // namespace detail

inline nlohmann::json pattern_to_json(const PatternMap& pat) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    nlohmann::json meta;
    meta["variant"] = pat.meta.variant;
    meta["c"] = pat.meta.c;
    if (pat.meta.angles)
        meta["alpha"] = {pat.meta.angles->a1, pat.meta.angles->a2, pat.meta.angles->a3};
    meta["deltas"] = {{pat.deltas.d1.real(), pat.deltas.d1.imag()},
                      {pat.deltas.d2.real(), pat.deltas.d2.imag()},
                      {pat.deltas.d3.real(), pat.deltas.d3.imag()}};
    meta["region"] = detail::region_name(pat.region.kind);
    meta["size"] = pat.region.n;
    meta["tolerance"] = {{"propagation_disagreement", pat.meta.propagation_disagreement},
                         {"dual_closure", pat.meta.dual_closure}};
    j["meta"] = meta;

    nlohmann::json points = nlohmann::json::array();
    for (const auto& [p, v] : pat.values) {
        nlohmann::json e;
        e["k"] = p.k;
        e["l"] = p.l;
        e["m"] = p.m;
        if (v.is_infinite()) {
            e["infinite"] = true;
            e["re"] = 0.0;
            e["im"] = 0.0;
        } else {
            e["infinite"] = false;
            e["re"] = v.value().real();
            e["im"] = v.value().imag();
        }
        points.push_back(e);
    }
    j["points"] = points;

    nlohmann::json circles = nlohmann::json::array();
    try {
        for (const IndexedCircle& c : extract_circles(pat)) {
            circles.push_back({{"k", c.center_index.k},
                               {"l", c.center_index.l},
                               {"m", c.center_index.m},
                               {"cre", c.circle.center.real()},
                               {"cim", c.circle.center.imag()},
                               {"r", c.circle.radius}});
        }
    } catch (const Error&) {
        // Not a circle pattern; the point data is still a valid document.
        circles = nlohmann::json::array();
    }
    j["circles"] = circles;
    return j;
}

inline void export_json(const PatternMap& pat, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("export_json: cannot open " + path);
    os << pattern_to_json(pat).dump(2) << "\n";
}

inline PatternMap import_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("import_json: cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("import_json: malformed file: ") + e.what());
    }
    if (!j.contains("format_version") || j["format_version"].get<int>() != kFormatVersion)
        throw Error("import_json: unsupported or missing format_version");

    PatternMap pat;
    const auto& meta = j.at("meta");
    pat.meta.variant = meta.at("variant").get<std::string>();
    pat.meta.c = meta.at("c").get<double>();
    if (meta.contains("alpha")) {
        auto a = meta.at("alpha");
        pat.meta.angles = AngleTriple(a.at(0).get<double>(), a.at(1).get<double>());
    }
    auto d = meta.at("deltas");
    pat.deltas = DeltaTriple(Complex(d.at(0).at(0).get<double>(), d.at(0).at(1).get<double>()),
                             Complex(d.at(1).at(0).get<double>(), d.at(1).at(1).get<double>()),
                             Complex(d.at(2).at(0).get<double>(), d.at(2).at(1).get<double>()));
    pat.region = Region{detail::region_kind(meta.at("region").get<std::string>()),
                        meta.at("size").get<int>()};
    if (meta.contains("tolerance")) {
        pat.meta.propagation_disagreement =
            meta.at("tolerance").value("propagation_disagreement", 0.0);
        pat.meta.dual_closure = meta.at("tolerance").value("dual_closure", 0.0);
    }
    for (const auto& e : j.at("points")) {
        LatticeIndex p{e.at("k").get<int>(), e.at("l").get<int>(), e.at("m").get<int>()};
        if (e.at("infinite").get<bool>())
            pat.values[p] = CPoint::infinity();
        else
            pat.values[p] = CPoint(Complex(e.at("re").get<double>(), e.at("im").get<double>()));
    }
    return pat;
}

// ---------------------------------------------------------------------------
// SVG rendering.
// ---------------------------------------------------------------------------

struct SvgOptions {
    double stroke_width = 0.02;
    bool point_markers = false;
    double padding = 0.5;
};

namespace detail {

inline std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

} // namespace detail

// One SVG circle element per finite circle, deterministic element order
// (lexicographic center index), auto-fitted viewbox; y axis flipped so the
// mathematical orientation is preserved.
inline void export_svg(const PatternMap& pat, const std::string& path, const SvgOptions& opt = {}) {
    std::vector<IndexedCircle> circles = extract_circles(pat);
    if (circles.empty()) throw Error("export_svg: no finite circles to draw");

    Real x0 = 1e300L, x1 = -1e300L, y0 = 1e300L, y1 = -1e300L;
    for (const IndexedCircle& c : circles) {
        x0 = std::min(x0, c.circle.center.real() - c.circle.radius);
        x1 = std::max(x1, c.circle.center.real() + c.circle.radius);
        y0 = std::min(y0, -c.circle.center.imag() - c.circle.radius);
        y1 = std::max(y1, -c.circle.center.imag() + c.circle.radius);
    }
    x0 -= opt.padding;
    y0 -= opt.padding;
    x1 += opt.padding;
    y1 += opt.padding;

    std::ofstream os(path);
    if (!os) throw Error("export_svg: cannot open " + path);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << detail::fmt(x0) << " "
       << detail::fmt(y0) << " " << detail::fmt(x1 - x0) << " " << detail::fmt(y1 - y0) << "\">\n";
    for (const IndexedCircle& c : circles) {
        os << "  <circle cx=\"" << detail::fmt(c.circle.center.real()) << "\" cy=\""
           << detail::fmt(-c.circle.center.imag()) << "\" r=\"" << detail::fmt(c.circle.radius)
           << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << detail::fmt(opt.stroke_width)
           << "\"/>\n";
    }
    if (opt.point_markers) {
        for (const auto& [p, v] : pat.values) {
            int s = sublattice_class(p);
            if ((s != 1 && s != -1) || v.is_infinite()) continue;
            os << "  <circle cx=\"" << detail::fmt(v.value().real()) << "\" cy=\""
               << detail::fmt(-v.value().imag()) << "\" r=\"" << detail::fmt(2.0L * opt.stroke_width)
               << "\" fill=\"black\"/>\n";
        }
    }
    os << "</svg>\n";
}

} // namespace hexcp
