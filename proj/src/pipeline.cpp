#include "gcplocate/pipeline.hpp"

#include "gcplocate/csv.hpp"

#include <fstream>
#include <sstream>

namespace gcp {

const SurveyImage* SurveyIndex::find(std::string_view image_id) const {
    for (const SurveyImage& img : images) {
        if (img.image_id == image_id) return &img;
    }
    return nullptr;
}

void save_survey_index(const std::filesystem::path& path, const SurveyIndex& index) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << "format_version,1\n";
    out << "image_id,width,height,tile_w,tile_h,overlap_x,overlap_y,pad_right,pad_bottom,rows,"
           "cols,altitude_m,path\n";
    for (const SurveyImage& img : index.images) {
        out << img.image_id << ',' << img.width << ',' << img.height << ',' << img.grid.tile_w
            << ',' << img.grid.tile_h << ',' << img.grid.overlap_x << ',' << img.grid.overlap_y
            << ',' << img.grid.pad_right << ',' << img.grid.pad_bottom << ',' << img.grid.rows
            << ',' << img.grid.cols << ',';
        if (img.altitude_m) out << fmt_double(*img.altitude_m);
        out << ',' << img.path << '\n';
    }
}

SurveyIndex load_survey_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path.string());
    SurveyIndex index;
    std::string line;
    std::size_t line_no = 0;
    bool version_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line.rfind("image_id,", 0) == 0) continue;
        if (line.rfind("format_version,", 0) == 0) {
            if (line != "format_version,1") throw FormatError("unsupported survey index version");
            version_seen = true;
            continue;
        }
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != 13) {
            throw ParseError("expected 13 fields, got " + std::to_string(f.size()), line_no);
        }
        SurveyImage img;
        img.image_id = f[0];
        img.width = static_cast<int>(parse_long(f[1], "width", line_no));
        img.height = static_cast<int>(parse_long(f[2], "height", line_no));
        const int tile_w = static_cast<int>(parse_long(f[3], "tile_w", line_no));
        const int tile_h = static_cast<int>(parse_long(f[4], "tile_h", line_no));
        const int ox = static_cast<int>(parse_long(f[5], "overlap_x", line_no));
        const int oy = static_cast<int>(parse_long(f[6], "overlap_y", line_no));
        img.grid = plan_grid(img.width, img.height, tile_w, tile_h, ox, oy);
        // stored grid must be reproducible, otherwise the index is stale
        if (img.grid.pad_right != parse_long(f[7], "pad_right", line_no) ||
            img.grid.pad_bottom != parse_long(f[8], "pad_bottom", line_no) ||
            img.grid.rows != parse_long(f[9], "rows", line_no) ||
            img.grid.cols != parse_long(f[10], "cols", line_no)) {
            throw ParseError("grid parameters do not reproduce the stored plan", line_no);
        }
        if (!f[11].empty()) img.altitude_m = parse_double(f[11], "altitude_m", line_no);
        img.path = f[12];
        if (index.find(img.image_id) != nullptr) {
            throw ParseError("duplicate image_id " + img.image_id, line_no);
        }
        index.images.push_back(std::move(img));
    }
    if (!version_seen) throw FormatError("survey index missing format_version");
    return index;
}

namespace {

void put(std::ostream& out, const char* key, const std::string& value) {
    out << key << ' ' << value << '\n';
}

}  // namespace

void save_config(const std::filesystem::path& path, const PipelineConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << "format_version 1\n";
    put(out, "tile_w", std::to_string(cfg.tile_w));
    put(out, "tile_h", std::to_string(cfg.tile_h));
    put(out, "overlap_x", std::to_string(cfg.overlap_x));
    put(out, "overlap_y", std::to_string(cfg.overlap_y));
    put(out, "pad_fill", std::to_string(cfg.pad_fill));
    put(out, "confidence_threshold", fmt_double(cfg.confidence_threshold));
    put(out, "sigma", fmt_double(cfg.sigma));
    put(out, "top_k", std::to_string(cfg.top_k));
    put(out, "dedupe_radius", fmt_double(cfg.dedupe_radius));
    put(out, "match_epsilon", fmt_double(cfg.match_epsilon));
    put(out, "match_class_aware", cfg.match_class_aware ? "1" : "0");
    put(out, "group_radius", fmt_double(cfg.group_radius));
    put(out, "seed", std::to_string(cfg.seed));
    put(out, "oracle_vertex_noise_sigma", fmt_double(cfg.oracle.vertex_noise_sigma));
    put(out, "oracle_false_positive_rate", fmt_double(cfg.oracle.false_positive_rate));
    put(out, "oracle_miss_rate", fmt_double(cfg.oracle.miss_rate));
    put(out, "oracle_fp_conf_alpha", fmt_double(cfg.oracle.fp_conf_alpha));
    put(out, "oracle_fp_conf_beta", fmt_double(cfg.oracle.fp_conf_beta));
    put(out, "oracle_conf_base", fmt_double(cfg.oracle.confidence.base));
    put(out, "oracle_conf_floor_px", fmt_double(cfg.oracle.confidence.floor_px));
    put(out, "oracle_conf_full_px", fmt_double(cfg.oracle.confidence.full_px));
    put(out, "oracle_conf_edge_penalty", fmt_double(cfg.oracle.confidence.edge_penalty));
    put(out, "oracle_conf_noise", fmt_double(cfg.oracle.confidence.noise));
    put(out, "survey_marker_count", std::to_string(cfg.survey.marker_count));
    put(out, "survey_group_min", std::to_string(cfg.survey.group_min));
    put(out, "survey_group_max", std::to_string(cfg.survey.group_max));
    put(out, "survey_central_per_marker", std::to_string(cfg.survey.central_per_marker));
    put(out, "survey_empty_images", std::to_string(cfg.survey.empty_images));
    put(out, "survey_marker_side_m", fmt_double(cfg.survey.marker_side_m));
    put(out, "survey_rotation_range_deg", fmt_double(cfg.survey.rotation_range_deg));
    {
        std::string alts;
        for (std::size_t k = 0; k < cfg.survey.altitudes_m.size(); ++k) {
            if (k) alts += ',';
            alts += fmt_double(cfg.survey.altitudes_m[k]);
        }
        put(out, "survey_altitudes_m", alts);
    }
    put(out, "survey_altitude_jitter_m", fmt_double(cfg.survey.altitude_jitter_m));
    put(out, "camera_image_w", std::to_string(cfg.camera.image_w));
    put(out, "camera_image_h", std::to_string(cfg.camera.image_h));
    put(out, "camera_focal_px", fmt_double(cfg.camera.focal_px));
    put(out, "camera_k1", fmt_double(cfg.camera.k1));
    put(out, "camera_k2", fmt_double(cfg.camera.k2));
    put(out, "camera_altitude_m", fmt_double(cfg.camera.altitude_m));
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path.string());
    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    bool version_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key, value;
        ss >> key;
        std::getline(ss, value);
        if (!value.empty() && value[0] == ' ') value.erase(0, 1);

        auto as_double = [&]() { return parse_double(value, key.c_str(), line_no); };
        auto as_int = [&]() { return static_cast<int>(parse_long(value, key.c_str(), line_no)); };

        if (key == "format_version") {
            if (value != "1") throw FormatError("unsupported config format_version " + value);
            version_seen = true;
        } else if (key == "tile_w") cfg.tile_w = as_int();
        else if (key == "tile_h") cfg.tile_h = as_int();
        else if (key == "overlap_x") cfg.overlap_x = as_int();
        else if (key == "overlap_y") cfg.overlap_y = as_int();
        else if (key == "pad_fill") cfg.pad_fill = as_int();
        else if (key == "confidence_threshold") cfg.confidence_threshold = as_double();
        else if (key == "sigma") cfg.sigma = as_double();
        else if (key == "top_k") cfg.top_k = as_int();
        else if (key == "dedupe_radius") cfg.dedupe_radius = as_double();
        else if (key == "match_epsilon") cfg.match_epsilon = as_double();
        else if (key == "match_class_aware") cfg.match_class_aware = value == "1";
        else if (key == "group_radius") cfg.group_radius = as_double();
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, "seed", line_no));
        else if (key == "oracle_vertex_noise_sigma") cfg.oracle.vertex_noise_sigma = as_double();
        else if (key == "oracle_false_positive_rate") cfg.oracle.false_positive_rate = as_double();
        else if (key == "oracle_miss_rate") cfg.oracle.miss_rate = as_double();
        else if (key == "oracle_fp_conf_alpha") cfg.oracle.fp_conf_alpha = as_double();
        else if (key == "oracle_fp_conf_beta") cfg.oracle.fp_conf_beta = as_double();
        else if (key == "oracle_conf_base") cfg.oracle.confidence.base = as_double();
        else if (key == "oracle_conf_floor_px") cfg.oracle.confidence.floor_px = as_double();
        else if (key == "oracle_conf_full_px") cfg.oracle.confidence.full_px = as_double();
        else if (key == "oracle_conf_edge_penalty") cfg.oracle.confidence.edge_penalty = as_double();
        else if (key == "oracle_conf_noise") cfg.oracle.confidence.noise = as_double();
        else if (key == "survey_marker_count") cfg.survey.marker_count = as_int();
        else if (key == "survey_group_min") cfg.survey.group_min = as_int();
        else if (key == "survey_group_max") cfg.survey.group_max = as_int();
        else if (key == "survey_central_per_marker") cfg.survey.central_per_marker = as_int();
        else if (key == "survey_empty_images") cfg.survey.empty_images = as_int();
        else if (key == "survey_marker_side_m") cfg.survey.marker_side_m = as_double();
        else if (key == "survey_rotation_range_deg") cfg.survey.rotation_range_deg = as_double();
        else if (key == "survey_altitudes_m") {
            cfg.survey.altitudes_m.clear();
            for (const std::string& field : split_csv(value)) {
                if (!field.empty()) {
                    cfg.survey.altitudes_m.push_back(
                        parse_double(field, "survey_altitudes_m", line_no));
                }
            }
        } else if (key == "survey_altitude_jitter_m") cfg.survey.altitude_jitter_m = as_double();
        else if (key == "camera_image_w") cfg.camera.image_w = as_int();
        else if (key == "camera_image_h") cfg.camera.image_h = as_int();
        else if (key == "camera_focal_px") cfg.camera.focal_px = as_double();
        else if (key == "camera_k1") cfg.camera.k1 = as_double();
        else if (key == "camera_k2") cfg.camera.k2 = as_double();
        else if (key == "camera_altitude_m") cfg.camera.altitude_m = as_double();
        else throw ParseError("unknown config key '" + key + "'", line_no);
    }
    if (!version_seen) throw FormatError("config missing format_version");
    return cfg;
}

}  // namespace gcp
