#pragma once

#include "gcplocate/detector.hpp"
#include "gcplocate/synth.hpp"
#include "gcplocate/tiler.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gcp {

// Catalog entry binding tiles back to one source image.
struct SurveyImage {
    std::string image_id;
    int width = 0;
    int height = 0;
    TileGrid grid;
    std::optional<double> altitude_m;
    std::string path;  // raster location, empty for truth-only surveys
};

struct SurveyIndex {
    std::vector<SurveyImage> images;

    const SurveyImage* find(std::string_view image_id) const;
};

// CSV with a format_version line. Grid parameters are re-derived on load and
// must reproduce the stored ones exactly.
void save_survey_index(const std::filesystem::path& path, const SurveyIndex& index);
SurveyIndex load_survey_index(const std::filesystem::path& path);

// Every knob of the pipeline; all of them surface as CLI flags and persist
// through the config file losslessly.
struct PipelineConfig {
    int tile_w = 608;
    int tile_h = 608;
    int overlap_x = 0;
    int overlap_y = 0;
    int pad_fill = kDefaultPadFill;
    double confidence_threshold = 0.7;
    double sigma = 2.0;
    int top_k = 5;
    double dedupe_radius = 10.0;
    double match_epsilon = 5.0;
    bool match_class_aware = true;
    double group_radius = 50.0;  // candidate-to-anchor association distance
    std::uint64_t seed = 0;
    OracleConfig oracle;
    SurveyPlanConfig survey;
    CameraModel camera;
};

void save_config(const std::filesystem::path& path, const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace gcp
