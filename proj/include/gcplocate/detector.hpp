#pragma once

#include "gcplocate/geometry.hpp"
#include "gcplocate/synth.hpp"
#include "gcplocate/tiler.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcp {

struct ConfidenceOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One oriented detection in tile-local coordinates.
struct Detection {
    std::string image_id;
    TileIndex tile;
    OrientedBox box;  // canonical
    MarkerClass cls = MarkerClass::Cross;
    double confidence = 0.0;
};

// Box vertices may poke this far beyond the tile; anything worse is invalid.
inline constexpr double kTileExcursionTolerance = 8.0;

// Detection interchange format, the contract for any external inference
// wrapper: one CSV record per line,
//   image_id,i,j,x1,y1,x2,y2,x3,y3,x4,y4,class_code,confidence
// with tile-local real-valued coordinates and class codes TL/TR/BL/BR/CR.
// Lines starting with '#' are comments.
std::vector<Detection> load_detections(const std::filesystem::path& path, int tile_w, int tile_h);
void save_detections(const std::filesystem::path& path, const std::vector<Detection>& dets);

// Mean confidence of a simulated true detection as a function of marker
// pixel size and distance-from-center ratio. Detectability ramps from zero
// at floor_px up to one at full_px; markers at the frame edge score lower.
struct ConfidenceModel {
    double base = 0.95;
    double floor_px = 12.0;
    double full_px = 18.0;
    double edge_penalty = 0.25;
    double noise = 0.04;

    double detect_prob(double px_size) const;
    double mean(double px_size, double center_ratio) const;
};

struct OracleConfig {
    double vertex_noise_sigma = 0.0;
    double false_positive_rate = 0.0;  // expected false boxes per tile
    double miss_rate = 0.0;            // chance of dropping a true marker
    double fp_conf_alpha = 2.0;        // Beta(alpha, beta) false-positive confidence
    double fp_conf_beta = 8.0;
    ConfidenceModel confidence;
    std::uint64_t rng_seed = 0;
};

// Synthetic detection source derived from ground truth. Every true marker
// that survives the miss/detectability draw yields one detection per tile
// that fully contains its box; Poisson(false_positive_rate) fake boxes are
// added per tile. Byte-deterministic under (scene, grid, cfg).
std::vector<Detection> oracle_detect(const SceneTruth& scene, const TileGrid& grid,
                                     const OracleConfig& cfg);

}  // namespace gcp
