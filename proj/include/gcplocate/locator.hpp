#pragma once

#include "gcplocate/detector.hpp"
#include "gcplocate/geometry.hpp"
#include "gcplocate/tiler.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcp {

struct PadRegionOnly : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A GCP measurement in full-image coordinates.
struct GcpCandidate {
    std::string image_id;
    PixelPoint position;
    MarkerClass cls = MarkerClass::Cross;
    double confidence = 0.0;
    TileIndex source_tile;
    bool clipped = false;  // landed in the pad band and was pulled to the image edge
};

// Tile-local detection -> full-image candidate: per-class vertex plus the
// tile offset, one addition per axis. A candidate falling into the pad band
// is clipped to the image and flagged; a box lying entirely in padding is a
// phantom grown from fill texture and raises PadRegionOnly.
GcpCandidate locate(const Detection& det, const TileGrid& grid);

// Merges duplicate observations of one marker produced by overlapping tiles:
// same-class candidates within `radius` px cluster transitively and the
// highest-confidence member survives (ties: smaller y, then x). Output is
// sorted by (image_id, class, y, x) so it does not depend on input order.
std::vector<GcpCandidate> dedupe_seams(std::vector<GcpCandidate> cands, double radius = 10.0);

// CSV export: image_id,x,y,class_code,confidence,tile_i,tile_j with
// coordinates rounded to 0.01 px.
void save_candidates_csv(const std::filesystem::path& path,
                         const std::vector<GcpCandidate>& cands);
std::vector<GcpCandidate> load_candidates_csv(const std::filesystem::path& path);

}  // namespace gcp
