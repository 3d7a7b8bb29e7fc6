#include "gcplocate/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gcp {

double distance(const PixelPoint& a, const PixelPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view class_code(MarkerClass cls) {
    switch (cls) {
        case MarkerClass::TopLeft: return "TL";
        case MarkerClass::TopRight: return "TR";
        case MarkerClass::BottomLeft: return "BL";
        case MarkerClass::BottomRight: return "BR";
        case MarkerClass::Cross: return "CR";
    }
    throw UnknownClass("invalid MarkerClass value");
}

MarkerClass class_from_code(std::string_view code) {
    if (code == "TL") return MarkerClass::TopLeft;
    if (code == "TR") return MarkerClass::TopRight;
    if (code == "BL") return MarkerClass::BottomLeft;
    if (code == "BR") return MarkerClass::BottomRight;
    if (code == "CR") return MarkerClass::Cross;
    throw UnknownClass("unknown class code '" + std::string(code) + "'");
}

PixelPoint OrientedBox::centroid() const {
    return {(v[0].x + v[1].x + v[2].x + v[3].x) / 4.0,
            (v[0].y + v[1].y + v[2].y + v[3].y) / 4.0};
}

double OrientedBox::area() const {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        const PixelPoint& a = v[static_cast<std::size_t>(k)];
        const PixelPoint& b = v[static_cast<std::size_t>((k + 1) % 4)];
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) / 2.0;
}

namespace {

double cross(const PixelPoint& o, const PixelPoint& a, const PixelPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Strict crossing of segments (p1,p2) and (p3,p4).
bool proper_intersect(const PixelPoint& p1, const PixelPoint& p2, const PixelPoint& p3,
                      const PixelPoint& p4) {
    const double d1 = cross(p3, p4, p1);
    const double d2 = cross(p3, p4, p2);
    const double d3 = cross(p1, p2, p3);
    const double d4 = cross(p1, p2, p4);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool is_simple_quad(const std::array<PixelPoint, 4>& q) {
    // Only the two non-adjacent edge pairs can cross.
    return !proper_intersect(q[0], q[1], q[2], q[3]) && !proper_intersect(q[1], q[2], q[3], q[0]);
}

// Larger x+y wins; ties by larger y, then larger x.
bool more_bottom_right(const PixelPoint& a, const PixelPoint& b) {
    const double sa = a.x + a.y;
    const double sb = b.x + b.y;
    if (sa != sb) return sa > sb;
    if (a.y != b.y) return a.y > b.y;
    return a.x > b.x;
}

}  // namespace

OrientedBox canonicalize(const std::array<PixelPoint, 4>& vertices) {
    for (const PixelPoint& p : vertices) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw DegenerateBox("non-finite vertex");
        }
    }
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            if (vertices[static_cast<std::size_t>(a)] == vertices[static_cast<std::size_t>(b)]) {
                throw DegenerateBox("duplicate vertex");
            }
        }
    }

    PixelPoint c{(vertices[0].x + vertices[1].x + vertices[2].x + vertices[3].x) / 4.0,
                 (vertices[0].y + vertices[1].y + vertices[2].y + vertices[3].y) / 4.0};

    // Ascending angle with y down is clockwise on screen. Distinct points from
    // one detection box never stack on the centroid, but ties on the exact
    // same ray are still ordered deterministically.
    struct Keyed {
        double ang, r2;
        PixelPoint p;
    };
    std::array<Keyed, 4> keyed;
    for (std::size_t k = 0; k < 4; ++k) {
        const double dx = vertices[k].x - c.x;
        const double dy = vertices[k].y - c.y;
        keyed[k] = {std::atan2(dy, dx), dx * dx + dy * dy, vertices[k]};
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.ang != b.ang) return a.ang < b.ang;
        if (a.r2 != b.r2) return a.r2 < b.r2;
        if (a.p.y != b.p.y) return a.p.y < b.p.y;
        return a.p.x < b.p.x;
    });

    std::array<PixelPoint, 4> ordered;
    for (std::size_t k = 0; k < 4; ++k) ordered[k] = keyed[k].p;

    if (!is_simple_quad(ordered)) {
        throw SelfIntersecting("no simple quadrilateral over these vertices");
    }

    std::size_t start = 0;
    for (std::size_t k = 1; k < 4; ++k) {
        if (more_bottom_right(ordered[k], ordered[start])) start = k;
    }

    OrientedBox box;
    for (std::size_t k = 0; k < 4; ++k) box.v[k] = ordered[(start + k) % 4];

    if (box.area() < 1e-6) {
        throw DegenerateBox("area below 1e-6 px^2");
    }
    return box;
}

PixelPoint gcp_vertex(const OrientedBox& box, MarkerClass cls) {
    switch (cls) {
        case MarkerClass::BottomRight: return box.v[0];
        case MarkerClass::BottomLeft: return box.v[1];
        case MarkerClass::TopLeft: return box.v[2];
        case MarkerClass::TopRight: return box.v[3];
        case MarkerClass::Cross: return box.centroid();
    }
    throw UnknownClass("invalid MarkerClass value");
}

}  // namespace gcp
