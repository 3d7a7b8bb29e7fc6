#include "gcplocate/detector.hpp"

#include "gcplocate/csv.hpp"
#include "gcplocate/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace gcp {

namespace {

void check_confidence(double conf, std::size_t line_no) {
    if (!(conf >= 0.0 && conf <= 1.0)) {
        throw ConfidenceOutOfRange("line " + std::to_string(line_no) + ": confidence " +
                                   fmt_double(conf) + " outside [0,1]");
    }
}

void check_vertex_bounds(const PixelPoint& p, int tile_w, int tile_h, std::size_t line_no) {
    const double tol = kTileExcursionTolerance;
    if (p.x < -tol || p.x > tile_w + tol || p.y < -tol || p.y > tile_h + tol) {
        throw ParseError("vertex (" + fmt_double(p.x) + "," + fmt_double(p.y) +
                             ") outside tile bounds plus " + fmt_double(tol) + " px",
                         line_no);
    }
}

}  // namespace

std::vector<Detection> load_detections(const std::filesystem::path& path, int tile_w,
                                       int tile_h) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path.string(), 0);

    std::vector<Detection> dets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const std::vector<std::string> f = split_csv(line);
        if (f.size() != 13) {
            throw ParseError("expected 13 fields, got " + std::to_string(f.size()), line_no);
        }
        Detection d;
        d.image_id = f[0];
        if (d.image_id.empty()) throw ParseError("empty image_id", line_no);
        d.tile.i = static_cast<int>(parse_long(f[1], "tile row i", line_no));
        d.tile.j = static_cast<int>(parse_long(f[2], "tile column j", line_no));
        if (d.tile.i < 1 || d.tile.j < 1) throw ParseError("tile index must be >= 1", line_no);

        std::array<PixelPoint, 4> v;
        for (std::size_t k = 0; k < 4; ++k) {
            v[k].x = parse_double(f[3 + 2 * k], "vertex x", line_no);
            v[k].y = parse_double(f[4 + 2 * k], "vertex y", line_no);
            check_vertex_bounds(v[k], tile_w, tile_h, line_no);
        }
        try {
            d.box = canonicalize(v);
        } catch (const DegenerateBox& e) {
            throw ParseError(std::string("degenerate box: ") + e.what(), line_no);
        } catch (const SelfIntersecting& e) {
            throw ParseError(std::string("self-intersecting box: ") + e.what(), line_no);
        }
        try {
            d.cls = class_from_code(f[11]);
        } catch (const UnknownClass&) {
            throw UnknownClass("line " + std::to_string(line_no) + ": unknown class code '" +
                               f[11] + "'");
        }
        d.confidence = parse_double(f[12], "confidence", line_no);
        check_confidence(d.confidence, line_no);
        dets.push_back(std::move(d));
    }
    return dets;
}

void save_detections(const std::filesystem::path& path, const std::vector<Detection>& dets) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "# image_id,i,j,x1,y1,x2,y2,x3,y3,x4,y4,class_code,confidence\n";
    for (const Detection& d : dets) {
        out << d.image_id << ',' << d.tile.i << ',' << d.tile.j;
        for (const PixelPoint& p : d.box.v) {
            out << ',' << fmt_double(p.x) << ',' << fmt_double(p.y);
        }
        out << ',' << class_code(d.cls) << ',' << fmt_double(d.confidence) << '\n';
    }
}

double ConfidenceModel::detect_prob(double px_size) const {
    if (px_size <= floor_px) return 0.0;
    if (px_size >= full_px) return 1.0;
    return (px_size - floor_px) / (full_px - floor_px);
}

double ConfidenceModel::mean(double px_size, double center_ratio) const {
    const double m = base * detect_prob(px_size) * (1.0 - edge_penalty * center_ratio * center_ratio);
    return std::clamp(m, 0.02, 0.98);
}

namespace {

double clamped_normal(std::mt19937_64& rng, double mean, double sigma, double lo, double hi) {
    std::normal_distribution<double> n(mean, sigma);
    return std::clamp(n(rng), lo, hi);
}

double beta_sample(std::mt19937_64& rng, double alpha, double beta) {
    std::gamma_distribution<double> ga(alpha, 1.0);
    std::gamma_distribution<double> gb(beta, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
}

// Tiles whose interior fully contains [min,max] on one axis (0-based).
std::vector<int> containing_tiles(double lo, double hi, int stride, int tile, int count) {
    std::vector<int> hits;
    int k = static_cast<int>(std::floor((hi - tile) / stride)) + 1;
    if (k < 0) k = 0;
    for (; k < count; ++k) {
        const double origin = static_cast<double>(k) * stride;
        if (origin > lo) break;
        if (hi < origin + tile) hits.push_back(k);
    }
    return hits;
}

}  // namespace

std::vector<Detection> oracle_detect(const SceneTruth& scene, const TileGrid& grid,
                                     const OracleConfig& cfg) {
    std::vector<Detection> out;
    const double d_max = std::hypot(grid.image_w / 2.0, grid.image_h / 2.0);

    for (const ImageTruth& img : scene.images) {
        for (const TruthMarker& m : img.markers) {
            std::mt19937_64 marker_rng =
                derive_rng(cfg.rng_seed, "miss", img.image_id + "/" + m.marker_id);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            if (unit(marker_rng) < cfg.miss_rate) continue;
            if (unit(marker_rng) >= cfg.confidence.detect_prob(m.px_size)) continue;

            double min_x = m.box.v[0].x, max_x = m.box.v[0].x;
            double min_y = m.box.v[0].y, max_y = m.box.v[0].y;
            for (const PixelPoint& p : m.box.v) {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
            const std::vector<int> cols_hit =
                containing_tiles(min_x, max_x, grid.stride_x(), grid.tile_w, grid.cols);
            const std::vector<int> rows_hit =
                containing_tiles(min_y, max_y, grid.stride_y(), grid.tile_h, grid.rows);

            const double ratio =
                std::hypot(m.gcp.x - grid.image_w / 2.0, m.gcp.y - grid.image_h / 2.0) / d_max;

            for (int i0 : rows_hit) {
                for (int j0 : cols_hit) {
                    const TileIndex idx{i0 + 1, j0 + 1};
                    std::mt19937_64 det_rng = derive_rng(
                        cfg.rng_seed, "det", img.image_id + "/" + m.marker_id, idx.i, idx.j);
                    std::array<PixelPoint, 4> v;
                    std::normal_distribution<double> noise(0.0, cfg.vertex_noise_sigma);
                    const double tol = kTileExcursionTolerance;
                    for (std::size_t k = 0; k < 4; ++k) {
                        const double nx = cfg.vertex_noise_sigma > 0.0 ? noise(det_rng) : 0.0;
                        const double ny = cfg.vertex_noise_sigma > 0.0 ? noise(det_rng) : 0.0;
                        v[k] = {std::clamp(m.box.v[k].x - grid.origin_x(idx) + nx, -tol,
                                           grid.tile_w + tol),
                                std::clamp(m.box.v[k].y - grid.origin_y(idx) + ny, -tol,
                                           grid.tile_h + tol)};
                    }
                    Detection d;
                    d.image_id = img.image_id;
                    d.tile = idx;
                    d.box = canonicalize(v);
                    d.cls = m.cls;
                    d.confidence = clamped_normal(det_rng, cfg.confidence.mean(m.px_size, ratio),
                                                  cfg.confidence.noise, 0.01, 0.98);
                    out.push_back(std::move(d));
                }
            }
        }

        if (cfg.false_positive_rate > 0.0) {
            std::poisson_distribution<int> fp_count(cfg.false_positive_rate);
            for (int i = 1; i <= grid.rows; ++i) {
                for (int j = 1; j <= grid.cols; ++j) {
                    std::mt19937_64 fp_rng = derive_rng(cfg.rng_seed, "fp", img.image_id, i, j);
                    const int n = fp_count(fp_rng);
                    std::uniform_real_distribution<double> unit(0.0, 1.0);
                    for (int k = 0; k < n; ++k) {
                        const double side = 12.0 + unit(fp_rng) * 36.0;
                        const double cx = 30.0 + unit(fp_rng) * (grid.tile_w - 60.0);
                        const double cy = 30.0 + unit(fp_rng) * (grid.tile_h - 60.0);
                        const double ang = unit(fp_rng) * std::acos(-1.0) / 2.0;
                        const double cr = std::cos(ang), sr = std::sin(ang);
                        const double h = side / 2.0;
                        std::array<PixelPoint, 4> v;
                        const std::array<std::pair<double, double>, 4> local = {
                            {{-h, -h}, {h, -h}, {h, h}, {-h, h}}};
                        for (std::size_t q = 0; q < 4; ++q) {
                            v[q] = {cx + local[q].first * cr - local[q].second * sr,
                                    cy + local[q].first * sr + local[q].second * cr};
                        }
                        Detection d;
                        d.image_id = img.image_id;
                        d.tile = {i, j};
                        d.box = canonicalize(v);
                        d.cls = kMarkerClasses[static_cast<std::size_t>(
                            unit(fp_rng) * kMarkerClasses.size()) % kMarkerClasses.size()];
                        d.confidence = std::clamp(
                            beta_sample(fp_rng, cfg.fp_conf_alpha, cfg.fp_conf_beta), 0.01, 0.98);
                        out.push_back(std::move(d));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace gcp
