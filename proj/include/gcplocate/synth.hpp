#pragma once

#include "gcplocate/geometry.hpp"

#include <opencv2/core.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcp {

struct NonInvertible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nadir-looking pinhole camera with Brown-Conrady radial distortion (k1, k2
// act on focal-normalized radius). Ground sample distance grows linearly
// with altitude: gsd = altitude / focal_px.
struct CameraModel {
    int image_w = 5472;
    int image_h = 3648;
    double focal_px = 3500.0;
    double k1 = -0.05;
    double k2 = 0.01;
    double altitude_m = 130.0;  // nominal; individual frames may differ

    double gsd_m() const { return altitude_m / focal_px; }
    double gsd_at(double alt_m) const { return alt_m / focal_px; }
    PixelPoint principal_point() const { return {image_w / 2.0, image_h / 2.0}; }
};

// Side of a square marker in pixels at the given flight altitude.
double marker_pixel_size(double marker_side_m, double altitude_m, const CameraModel& cam);

// Radial displacement about the principal point:
//   out = c + (p - c) * (1 + k1 r^2 + k2 r^4),  r = |p - c| / focal_px.
// Throws NonInvertible if the model folds the frame onto itself.
PixelPoint distort(const PixelPoint& p, const CameraModel& cam);
PixelPoint undistort(const PixelPoint& p, const CameraModel& cam);

// --- ground truth -----------------------------------------------------------

struct TruthMarker {
    std::string marker_id;
    MarkerClass cls = MarkerClass::Cross;
    OrientedBox box;         // post-distortion pixel vertices, canonical
    PixelPoint gcp;          // always gcp_vertex(box, cls)
    double px_size = 0.0;    // nominal marker side in pixels at this altitude
};

struct ImageTruth {
    std::string image_id;
    double altitude_m = 0.0;
    std::vector<TruthMarker> markers;
};

struct SceneTruth {
    std::vector<ImageTruth> images;
    std::vector<std::string> warnings;  // out-of-frame markers etc.

    const ImageTruth* find(std::string_view image_id) const;
    std::size_t marker_observations() const;
};

// Flattened (image, marker) observation, the unit the filtering and
// evaluation metrics count.
struct TruthObs {
    std::string image_id;
    std::string marker_id;
    MarkerClass cls = MarkerClass::Cross;
    PixelPoint gcp;
    double px_size = 0.0;
    double altitude_m = 0.0;
};

std::vector<TruthObs> flatten(const SceneTruth& truth);

// --- survey synthesis -------------------------------------------------------

struct MarkerPlacement {
    std::string marker_id;
    MarkerClass cls = MarkerClass::Cross;
    double ground_x = 0.0;  // meters
    double ground_y = 0.0;
    double side_m = 0.96;
    double rotation_rad = 0.0;
};

struct ImagePlan {
    std::string image_id;
    double center_x = 0.0;  // ground meters under the principal point
    double center_y = 0.0;
    double altitude_m = 130.0;
};

struct SurveyLayout {
    std::vector<MarkerPlacement> markers;
    std::vector<ImagePlan> images;
};

struct SurveyPlanConfig {
    int marker_count = 11;
    int group_min = 19;  // images observing each marker
    int group_max = 71;
    int central_per_marker = 6;  // near-center observations guaranteed per marker
    int empty_images = 15;       // marker-free frames
    double marker_side_m = 0.96;
    double rotation_range_deg = 20.0;  // marker yaw, centered on axis-aligned
    std::vector<double> altitudes_m = {130.0};
    double altitude_jitter_m = 4.0;
};

// Deterministic layout: markers far enough apart that no frame sees two
// sites, per-marker group sizes drawn from [group_min, group_max], image
// centers jittered so the marker always stays fully inside the frame.
SurveyLayout plan_survey(const SurveyPlanConfig& cfg, const CameraModel& cam, std::uint64_t seed);

struct RenderOptions {
    bool confusers = true;  // white rectangles that resemble markers
    int confusers_per_image = 3;
};

using RasterSink = std::function<void(const std::string& image_id, const cv::Mat& image)>;

// Projects the layout into per-image ground truth. When a sink is given,
// also renders the pixels (textured background, marker shapes, confusers)
// and hands each frame over; without a sink, only the geometry is produced.
SceneTruth render_survey(const SurveyLayout& layout, const CameraModel& cam, std::uint64_t seed,
                         const RasterSink& sink = nullptr, const RenderOptions& opts = {});

// --- persistence ------------------------------------------------------------

void save_scene_truth(const std::filesystem::path& path, const SceneTruth& truth);
// Altitudes are not part of the truth CSV; apply_flightplan fills them in
// and adds marker-free frames.
SceneTruth load_scene_truth(const std::filesystem::path& path);

struct Flightplan {
    CameraModel camera;
    double marker_side_m = 0.96;
    std::vector<ImagePlan> images;
};

void save_flightplan(const std::filesystem::path& path, const SurveyLayout& layout,
                     const CameraModel& cam, double marker_side_m);
Flightplan load_flightplan(const std::filesystem::path& path);
void apply_flightplan(SceneTruth& truth, const Flightplan& plan);

}  // namespace gcp
