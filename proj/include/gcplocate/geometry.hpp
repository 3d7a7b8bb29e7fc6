#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gcp {

// Image-plane point. x runs along columns (rightward), y along rows
// (downward), origin at the top-left. Sub-pixel values are kept through the
// whole pipeline; rounding happens only at export.
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const PixelPoint& a, const PixelPoint& b) {
    return a.x == b.x && a.y == b.y;
}
inline bool operator!=(const PixelPoint& a, const PixelPoint& b) { return !(a == b); }

double distance(const PixelPoint& a, const PixelPoint& b);

// Marker taxonomy: four L-shapes named after the corner that carries the
// ground control point, plus the cross whose GCP sits at its center.
enum class MarkerClass { TopLeft, TopRight, BottomLeft, BottomRight, Cross };

inline constexpr std::array<MarkerClass, 5> kMarkerClasses = {
    MarkerClass::TopLeft, MarkerClass::TopRight, MarkerClass::BottomLeft,
    MarkerClass::BottomRight, MarkerClass::Cross};

struct UnknownClass : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two-letter codes used in every file format: TL, TR, BL, BR, CR.
std::string_view class_code(MarkerClass cls);
MarkerClass class_from_code(std::string_view code);  // throws UnknownClass

struct DegenerateBox : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SelfIntersecting : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Oriented detection box as four vertices in canonical order: v1 is the
// bottom-right-most vertex (maximal x+y, ties by larger y then larger x) and
// v2..v4 continue clockwise on screen (ascending angle about the centroid
// with y pointing down). Build instances through canonicalize().
struct OrientedBox {
    std::array<PixelPoint, 4> v{};

    PixelPoint centroid() const;
    double area() const;
};

inline bool operator==(const OrientedBox& a, const OrientedBox& b) { return a.v == b.v; }

// Reorders four vertices into canonical form. The vertex set is preserved
// exactly; applying it twice gives the same box.
OrientedBox canonicalize(const std::array<PixelPoint, 4>& vertices);

// Marker-class to GCP position: the class corner of the box, or the centroid
// for cross markers.
PixelPoint gcp_vertex(const OrientedBox& box, MarkerClass cls);

}  // namespace gcp
