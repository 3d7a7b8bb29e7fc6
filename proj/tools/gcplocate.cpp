// gcplocate: detector-agnostic GCP-marker post-processing for UAV surveys.
// Subcommands: synth (synthetic survey), tile (crop rasters), run (full
// pipeline), sweep (threshold calibration), eval (reports from candidates).

#include "CLI11.hpp"

#include "gcplocate/csv.hpp"
#include "gcplocate/detector.hpp"
#include "gcplocate/eval.hpp"
#include "gcplocate/filter.hpp"
#include "gcplocate/locator.hpp"
#include "gcplocate/pipeline.hpp"
#include "gcplocate/ranker.hpp"
#include "gcplocate/synth.hpp"
#include "gcplocate/tiler.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gcp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPipeline = 1;
constexpr int kExitValidation = 2;

// Removes everything written so far if the command dies halfway.
struct OutputGuard {
    std::vector<fs::path> written;
    bool armed = true;

    fs::path track(const fs::path& p) {
        written.push_back(p);
        return p;
    }
    void disarm() { armed = false; }
    ~OutputGuard() {
        if (!armed) return;
        for (const fs::path& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

std::string timestamp_suffix(bool no_timestamps) {
    if (no_timestamps) return "";
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "_%Y%m%d_%H%M%S", &tm);
    return buf;
}

struct Survey {
    SurveyIndex index;
    std::optional<SceneTruth> truth;
};

// Completes loaded truth against the index: marker-free frames become empty
// entries and altitudes come from the catalog.
void complete_truth(SceneTruth& truth, const SurveyIndex& index) {
    SceneTruth merged;
    merged.warnings = truth.warnings;
    merged.images.reserve(index.images.size());
    for (const SurveyImage& img : index.images) {
        ImageTruth it;
        it.image_id = img.image_id;
        it.altitude_m = img.altitude_m.value_or(0.0);
        if (const ImageTruth* have = truth.find(img.image_id)) it.markers = have->markers;
        merged.images.push_back(std::move(it));
    }
    truth = std::move(merged);
}

Survey load_survey(const fs::path& dir) {
    Survey s;
    s.index = load_survey_index(dir / "survey_index.csv");
    if (s.index.images.empty()) throw FormatError("survey index lists no images");
    const fs::path truth_path = dir / "scene_truth.csv";
    if (fs::exists(truth_path)) {
        SceneTruth t = load_scene_truth(truth_path);
        complete_truth(t, s.index);
        s.truth = std::move(t);
    }
    return s;
}

const TileGrid& uniform_grid(const SurveyIndex& index) {
    const TileGrid& g = index.images.front().grid;
    for (const SurveyImage& img : index.images) {
        if (!(img.grid == g)) {
            throw FormatError("survey images do not share one grid; this pipeline expects a "
                              "uniform camera per survey");
        }
    }
    return g;
}

struct CommonOpts {
    PipelineConfig cfg;
    bool no_timestamps = false;
    std::string config_path;  // consumed by the pre-scan in main
};

void add_config_flags(CLI::App* cmd, CommonOpts& opts) {
    PipelineConfig& cfg = opts.cfg;
    cmd->add_option("--config", opts.config_path, "Config file with defaults for every flag");
    cmd->add_flag("--no-timestamps", opts.no_timestamps,
                  "Suppress timestamps in output file names");
    cmd->add_option("--tile-w", cfg.tile_w, "Tile width in px (multiple of 32)");
    cmd->add_option("--tile-h", cfg.tile_h, "Tile height in px (multiple of 32)");
    cmd->add_option("--overlap-x", cfg.overlap_x, "Horizontal tile overlap in px");
    cmd->add_option("--overlap-y", cfg.overlap_y, "Vertical tile overlap in px");
    cmd->add_option("--pad-fill", cfg.pad_fill, "Gray value filling the padded band");
    cmd->add_option("--threshold", cfg.confidence_threshold, "Confidence threshold");
    cmd->add_option("--sigma", cfg.sigma, "Centrality weight in the ranking score");
    cmd->add_option("--top-k", cfg.top_k, "Observations kept per marker");
    cmd->add_option("--dedupe-radius", cfg.dedupe_radius, "Seam dedupe radius in px");
    cmd->add_option("--epsilon", cfg.match_epsilon, "Truth matching distance in px");
    cmd->add_option("--class-aware", cfg.match_class_aware, "Require class agreement in matching");
    cmd->add_option("--group-radius", cfg.group_radius, "Candidate-to-anchor grouping radius");
    cmd->add_option("--seed", cfg.seed, "Seed for every random draw");
    cmd->add_option("--noise-sigma", cfg.oracle.vertex_noise_sigma, "Oracle vertex noise sigma");
    cmd->add_option("--fp-rate", cfg.oracle.false_positive_rate, "Oracle false positives per tile");
    cmd->add_option("--miss-rate", cfg.oracle.miss_rate, "Oracle chance of dropping a marker");
    cmd->add_option("--markers", cfg.survey.marker_count, "Synthetic marker count");
    cmd->add_option("--group-min", cfg.survey.group_min, "Min images observing one marker");
    cmd->add_option("--group-max", cfg.survey.group_max, "Max images observing one marker");
    cmd->add_option("--empty-images", cfg.survey.empty_images, "Marker-free frames");
    cmd->add_option("--marker-side", cfg.survey.marker_side_m, "Marker side in meters");
    cmd->add_option("--altitudes", cfg.survey.altitudes_m, "Flight altitude bands in meters")
        ->delimiter(',');
    cmd->add_option("--image-w", cfg.camera.image_w, "Frame width in px");
    cmd->add_option("--image-h", cfg.camera.image_h, "Frame height in px");
    cmd->add_option("--focal-px", cfg.camera.focal_px, "Focal length in px");
    cmd->add_option("--k1", cfg.camera.k1, "Radial distortion k1");
    cmd->add_option("--k2", cfg.camera.k2, "Radial distortion k2");
}

// --- synth -------------------------------------------------------------------

int cmd_synth(const CommonOpts& opts, const fs::path& out_dir, bool rasters) {
    const PipelineConfig& cfg = opts.cfg;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) {
        std::cerr << "synth: cannot create output directory " << out_dir << "\n";
        return kExitPipeline;
    }

    OutputGuard guard;
    const SurveyLayout layout = plan_survey(cfg.survey, cfg.camera, cfg.seed);

    RasterSink sink = nullptr;
    fs::path raster_dir = out_dir / "rasters";
    if (rasters) {
        fs::create_directories(raster_dir);
        sink = [&](const std::string& image_id, const cv::Mat& image) {
            save_raster(guard.track(raster_dir / (image_id + ".png")), image);
        };
    }
    const SceneTruth truth = render_survey(layout, cfg.camera, cfg.seed, sink);
    for (const std::string& w : truth.warnings) std::cerr << "synth: warning: " << w << "\n";

    SurveyIndex index;
    for (const ImagePlan& img : layout.images) {
        SurveyImage si;
        si.image_id = img.image_id;
        si.width = cfg.camera.image_w;
        si.height = cfg.camera.image_h;
        si.grid = plan_grid(si.width, si.height, cfg.tile_w, cfg.tile_h, cfg.overlap_x,
                            cfg.overlap_y);
        si.altitude_m = img.altitude_m;
        if (rasters) si.path = ("rasters" / fs::path(img.image_id + ".png")).string();
        index.images.push_back(std::move(si));
    }
    save_survey_index(guard.track(out_dir / "survey_index.csv"), index);
    save_scene_truth(guard.track(out_dir / "scene_truth.csv"), truth);
    save_flightplan(guard.track(out_dir / "flightplan.txt"), layout, cfg.camera,
                    cfg.survey.marker_side_m);
    save_config(guard.track(out_dir / "synth_config.txt"), cfg);

    std::cout << "synth: " << index.images.size() << " images, " << layout.markers.size()
              << " markers, " << truth.marker_observations() << " observations -> " << out_dir
              << "\n";
    guard.disarm();
    return kExitOk;
}

// --- tile --------------------------------------------------------------------

int cmd_tile(const CommonOpts& opts, const fs::path& survey_dir,
             const std::vector<std::string>& image_files, const fs::path& out_dir,
             const std::string& only_image) {
    const PipelineConfig& cfg = opts.cfg;
    fs::create_directories(out_dir);
    OutputGuard guard;
    int tiles_written = 0;

    if (!image_files.empty()) {
        // standalone mode: plan grids for loose rasters and build a fresh index
        SurveyIndex index;
        for (const std::string& file : image_files) {
            const cv::Mat img = load_raster(file);
            SurveyImage si;
            si.image_id = fs::path(file).stem().string();
            si.width = img.cols;
            si.height = img.rows;
            si.grid = plan_grid(img.cols, img.rows, cfg.tile_w, cfg.tile_h, cfg.overlap_x,
                                cfg.overlap_y);
            si.path = fs::absolute(file).string();
            for (const Tile& t : crop_tiles(img, si.grid, cfg.pad_fill)) {
                save_raster(guard.track(out_dir / tile_filename(si.image_id, t.index)), t.image);
                ++tiles_written;
            }
            index.images.push_back(std::move(si));
        }
        save_survey_index(guard.track(out_dir / "survey_index.csv"), index);
    } else {
        const SurveyIndex index = load_survey_index(survey_dir / "survey_index.csv");
        for (const SurveyImage& si : index.images) {
            if (!only_image.empty() && si.image_id != only_image) continue;
            if (si.path.empty()) {
                std::cerr << "tile: " << si.image_id << " has no raster (truth-only survey)\n";
                return kExitValidation;
            }
            const cv::Mat img = load_raster(survey_dir / si.path);
            for (const Tile& t : crop_tiles(img, si.grid, cfg.pad_fill)) {
                save_raster(guard.track(out_dir / tile_filename(si.image_id, t.index)), t.image);
                ++tiles_written;
            }
        }
    }
    std::cout << "tile: wrote " << tiles_written << " tiles to " << out_dir << "\n";
    guard.disarm();
    return kExitOk;
}

// --- shared pipeline pieces ----------------------------------------------------

std::vector<Detection> gather_detections(const Survey& survey, const PipelineConfig& cfg,
                                         bool use_oracle, const fs::path& det_file) {
    const TileGrid& grid = uniform_grid(survey.index);
    if (use_oracle) {
        if (!survey.truth) {
            throw FormatError("--oracle needs scene_truth.csv in the survey directory");
        }
        OracleConfig oracle = cfg.oracle;
        oracle.rng_seed = cfg.seed;
        return oracle_detect(*survey.truth, grid, oracle);
    }
    std::vector<Detection> dets = load_detections(det_file, grid.tile_w, grid.tile_h);
    for (const Detection& d : dets) {
        const SurveyImage* img = survey.index.find(d.image_id);
        if (img == nullptr) {
            throw FormatError("detections reference unknown image '" + d.image_id + "'");
        }
        if (!img->grid.contains(d.tile)) {
            throw FormatError("detection tile (" + std::to_string(d.tile.i) + "," +
                              std::to_string(d.tile.j) + ") outside grid of " + d.image_id);
        }
    }
    return dets;
}

std::vector<GcpCandidate> locate_all(const std::vector<Detection>& dets, const Survey& survey,
                                     const PipelineConfig& cfg, int* pad_skipped) {
    std::vector<GcpCandidate> cands;
    cands.reserve(dets.size());
    for (const Detection& d : dets) {
        const SurveyImage* img = survey.index.find(d.image_id);
        try {
            cands.push_back(locate(d, img->grid));
        } catch (const PadRegionOnly&) {
            if (pad_skipped) ++*pad_skipped;
        }
    }
    return dedupe_seams(std::move(cands), cfg.dedupe_radius);
}

// --- run ----------------------------------------------------------------------

int cmd_run(const CommonOpts& opts, const fs::path& survey_dir, const fs::path& out_dir,
            bool use_oracle, const fs::path& det_file, const fs::path& association_file) {
    const PipelineConfig& cfg = opts.cfg;
    const Survey survey = load_survey(survey_dir);
    fs::create_directories(out_dir);
    OutputGuard guard;
    const std::string ts = timestamp_suffix(opts.no_timestamps);

    const std::vector<Detection> dets = gather_detections(survey, cfg, use_oracle, det_file);
    int pad_skipped = 0;
    const std::vector<GcpCandidate> cands = locate_all(dets, survey, cfg, &pad_skipped);
    save_candidates_csv(guard.track(out_dir / ("candidates" + ts + ".csv")), cands);
    std::cout << "run: " << dets.size() << " detections -> " << cands.size() << " candidates";
    if (pad_skipped > 0) std::cout << " (" << pad_skipped << " pad-only boxes dropped)";
    std::cout << "\n";

    const SceneTruth* truth = survey.truth ? &*survey.truth : nullptr;
    const MatchRule rule{cfg.match_epsilon, cfg.match_class_aware};
    const std::vector<ThresholdReport> reports =
        sweep(cands, truth, threshold_grid(0.0, 1.0, 0.05), rule);
    write_sweep_csv(guard.track(out_dir / ("sweep" + ts + ".csv")), reports);
    write_sweep_svg(guard.track(out_dir / ("sweep" + ts + ".svg")), reports);

    const std::vector<GcpCandidate> retained = apply_threshold(cands, cfg.confidence_threshold);
    if (retained.empty()) {
        std::cerr << "run: warning: no candidate reaches threshold "
                  << fmt_double(cfg.confidence_threshold) << "; selection is empty\n";
    }

    std::vector<MarkerAnchor> anchors;
    if (truth != nullptr) {
        anchors = anchors_from_truth(*truth);
    } else if (!association_file.empty()) {
        anchors = load_association_csv(association_file);
    } else {
        std::cerr << "run: no truth and no --association; skipping ranking stage\n";
    }

    const SurveyImage& cam = survey.index.images.front();
    std::vector<GcpGroup> ranked;
    for (GcpGroup& g : group_candidates(retained, anchors, cfg.group_radius, cam.width,
                                        cam.height, cfg.sigma)) {
        ranked.push_back(rank_group(std::move(g)));
    }
    save_selection_csv(guard.track(out_dir / ("selection" + ts + ".csv")), ranked, cfg.top_k);
    for (const GcpGroup& g : ranked) {
        const std::vector<ScoredCandidate> top = select_top_k(g, cfg.top_k);
        std::cout << "run: " << g.marker_id << " members=" << g.members.size() << " top"
                  << cfg.top_k << " PONA=" << fmt_fixed(pona(top), 2) << "\n";
    }

    if (truth != nullptr) {
        const MatchResult m = match_survey(cands, *truth, rule);
        write_error_scatter_csv(guard.track(out_dir / ("error_scatter" + ts + ".csv")), m);
        write_error_scatter_svg(guard.track(out_dir / ("error_scatter" + ts + ".svg")), m);
        if (!m.pairs.empty()) {
            write_error_stats_csv(guard.track(out_dir / ("error_stats" + ts + ".csv")),
                                  error_stats(m));
        }
        double alt_lo = 1e30, alt_hi = -1e30;
        for (const ImageTruth& img : truth->images) {
            alt_lo = std::min(alt_lo, img.altitude_m);
            alt_hi = std::max(alt_hi, img.altitude_m);
        }
        std::vector<double> edges;
        for (double e = std::floor(alt_lo / 20.0) * 20.0; e <= alt_hi + 20.0; e += 20.0) {
            edges.push_back(e);
        }
        write_band_report_csv(guard.track(out_dir / ("band_report" + ts + ".csv")),
                              band_report(m, *truth, edges));
        write_ranking_report_csv(guard.track(out_dir / ("ranking_report" + ts + ".csv")),
                                 ranking_report(ranked, *truth, {3, 5, 8, 10}, rule));
    }

    guard.disarm();
    return kExitOk;
}

// --- sweep ----------------------------------------------------------------------

int cmd_sweep(const CommonOpts& opts, const fs::path& survey_dir, const fs::path& out_dir,
              bool use_oracle, const fs::path& det_file, double from, double to, double step) {
    const PipelineConfig& cfg = opts.cfg;
    const Survey survey = load_survey(survey_dir);
    fs::create_directories(out_dir);
    OutputGuard guard;
    const std::string ts = timestamp_suffix(opts.no_timestamps);

    const std::vector<Detection> dets = gather_detections(survey, cfg, use_oracle, det_file);
    const std::vector<GcpCandidate> cands = locate_all(dets, survey, cfg, nullptr);
    const SceneTruth* truth = survey.truth ? &*survey.truth : nullptr;
    const MatchRule rule{cfg.match_epsilon, cfg.match_class_aware};
    const std::vector<ThresholdReport> reports =
        sweep(cands, truth, threshold_grid(from, to, step), rule);
    write_sweep_csv(guard.track(out_dir / ("sweep" + ts + ".csv")), reports);
    write_sweep_svg(guard.track(out_dir / ("sweep" + ts + ".svg")), reports);
    std::cout << "sweep: " << reports.size() << " thresholds -> " << out_dir << "\n";
    guard.disarm();
    return kExitOk;
}

// --- eval -----------------------------------------------------------------------

int cmd_eval(const CommonOpts& opts, const fs::path& survey_dir, const fs::path& cand_file,
             const fs::path& out_dir) {
    const PipelineConfig& cfg = opts.cfg;
    const Survey survey = load_survey(survey_dir);
    if (!survey.truth) {
        std::cerr << "eval: survey has no scene_truth.csv; nothing to evaluate against\n";
        return kExitValidation;
    }
    fs::create_directories(out_dir);
    OutputGuard guard;
    const std::string ts = timestamp_suffix(opts.no_timestamps);

    const std::vector<GcpCandidate> cands = load_candidates_csv(cand_file);
    const MatchRule rule{cfg.match_epsilon, cfg.match_class_aware};
    const MatchResult m = match_survey(cands, *survey.truth, rule);
    write_error_scatter_csv(guard.track(out_dir / ("error_scatter" + ts + ".csv")), m);
    write_error_scatter_svg(guard.track(out_dir / ("error_scatter" + ts + ".svg")), m);
    if (!m.pairs.empty()) {
        const ErrorStats stats = error_stats(m);
        write_error_stats_csv(guard.track(out_dir / ("error_stats" + ts + ".csv")), stats);
        std::cout << "eval: " << stats.pairs << " pairs, max error "
                  << fmt_fixed(stats.max_error, 3) << " px, within 2 px "
                  << fmt_fixed(100.0 * stats.within(2), 1) << "%\n";
    } else {
        std::cout << "eval: no candidate matched any truth observation\n";
    }

    double alt_lo = 1e30, alt_hi = -1e30;
    for (const ImageTruth& img : survey.truth->images) {
        alt_lo = std::min(alt_lo, img.altitude_m);
        alt_hi = std::max(alt_hi, img.altitude_m);
    }
    std::vector<double> edges;
    for (double e = std::floor(alt_lo / 20.0) * 20.0; e <= alt_hi + 20.0; e += 20.0) {
        edges.push_back(e);
    }
    write_band_report_csv(guard.track(out_dir / ("band_report" + ts + ".csv")),
                          band_report(m, *survey.truth, edges));

    const SurveyImage& cam = survey.index.images.front();
    std::vector<GcpGroup> ranked;
    for (GcpGroup& g : group_candidates(cands, anchors_from_truth(*survey.truth),
                                        cfg.group_radius, cam.width, cam.height, cfg.sigma)) {
        ranked.push_back(rank_group(std::move(g)));
    }
    write_ranking_report_csv(guard.track(out_dir / ("ranking_report" + ts + ".csv")),
                             ranking_report(ranked, *survey.truth, {3, 5, 8, 10}, rule));
    guard.disarm();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GCP-marker detection post-processing for UAV photogrammetry"};
    app.require_subcommand(1);

    CommonOpts opts;

    // --config seeds the defaults; explicit flags still win.
    for (int a = 1; a < argc - 1; ++a) {
        if (std::string_view(argv[a]) == "--config") {
            try {
                opts.cfg = load_config(argv[a + 1]);
            } catch (const std::exception& e) {
                std::cerr << "config: " << e.what() << "\n";
                return kExitValidation;
            }
        }
    }
    std::string survey_dir, out_dir, det_file, association_file, only_image, cand_file;
    std::vector<std::string> image_files;
    bool use_oracle = false;
    bool rasters = false;
    double sweep_from = 0.0, sweep_to = 1.0, sweep_step = 0.05;

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic survey with ground truth");
    synth->add_option("--out", out_dir, "Survey output directory")->required();
    synth->add_flag("--rasters", rasters, "Render PNG frames (slow; truth-only otherwise)");
    add_config_flags(synth, opts);

    CLI::App* tile = app.add_subcommand("tile", "Crop survey rasters into detector tiles");
    tile->add_option("--survey", survey_dir, "Survey directory with survey_index.csv");
    tile->add_option("--images", image_files, "Loose raster files instead of a survey");
    tile->add_option("--image", only_image, "Restrict to one image id");
    tile->add_option("--out", out_dir, "Tile output directory")->required();
    add_config_flags(tile, opts);

    CLI::App* run = app.add_subcommand("run", "Locate, dedupe, filter, rank and report");
    run->add_option("--survey", survey_dir, "Survey directory")->required();
    run->add_option("--out", out_dir, "Report output directory");
    run->add_flag("--oracle", use_oracle, "Use the synthetic oracle detector");
    run->add_option("--detections", det_file, "Detection interchange file");
    run->add_option("--association", association_file, "marker_id,image_id,x,y anchor file");
    add_config_flags(run, opts);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Precision / loss-ratio threshold sweep");
    sweep_cmd->add_option("--survey", survey_dir, "Survey directory")->required();
    sweep_cmd->add_option("--out", out_dir, "Report output directory");
    sweep_cmd->add_flag("--oracle", use_oracle, "Use the synthetic oracle detector");
    sweep_cmd->add_option("--detections", det_file, "Detection interchange file");
    sweep_cmd->add_option("--from", sweep_from, "First threshold");
    sweep_cmd->add_option("--to", sweep_to, "Last threshold");
    sweep_cmd->add_option("--step", sweep_step, "Threshold step");
    add_config_flags(sweep_cmd, opts);

    CLI::App* eval_cmd = app.add_subcommand("eval", "Reports for an existing candidate CSV");
    eval_cmd->add_option("--survey", survey_dir, "Survey directory")->required();
    eval_cmd->add_option("--candidates", cand_file, "Candidate CSV from `run`")->required();
    eval_cmd->add_option("--out", out_dir, "Report output directory");
    add_config_flags(eval_cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (synth->parsed()) return cmd_synth(opts, out_dir, rasters);
        if (tile->parsed()) {
            if (survey_dir.empty() && image_files.empty()) {
                std::cerr << "tile: need --survey or --images\n";
                return kExitValidation;
            }
            return cmd_tile(opts, survey_dir, image_files, out_dir, only_image);
        }
        if (run->parsed()) {
            if (!use_oracle && det_file.empty()) {
                std::cerr << "run: need --oracle or --detections FILE\n";
                return kExitValidation;
            }
            if (out_dir.empty()) out_dir = (fs::path(survey_dir) / "run").string();
            return cmd_run(opts, survey_dir, out_dir, use_oracle, det_file, association_file);
        }
        if (sweep_cmd->parsed()) {
            if (!use_oracle && det_file.empty()) {
                std::cerr << "sweep: need --oracle or --detections FILE\n";
                return kExitValidation;
            }
            if (out_dir.empty()) out_dir = (fs::path(survey_dir) / "sweep").string();
            return cmd_sweep(opts, survey_dir, out_dir, use_oracle, det_file, sweep_from, sweep_to,
                             sweep_step);
        }
        if (eval_cmd->parsed()) {
            if (out_dir.empty()) out_dir = (fs::path(survey_dir) / "eval").string();
            return cmd_eval(opts, survey_dir, cand_file, out_dir);
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnknownClass& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConfidenceOutOfRange& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const BadThreshold& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return kExitOk;
}
