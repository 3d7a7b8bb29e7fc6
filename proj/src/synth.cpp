#include "gcplocate/synth.hpp"

#include "gcplocate/csv.hpp"
#include "gcplocate/rng.hpp"

#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gcp {

double marker_pixel_size(double marker_side_m, double altitude_m, const CameraModel& cam) {
    return marker_side_m / cam.gsd_at(altitude_m);
}

namespace {

double corner_radius_norm(const CameraModel& cam) {
    return std::hypot(cam.image_w / 2.0, cam.image_h / 2.0) / cam.focal_px;
}

// Radial gain 1 + k1 r^2 + k2 r^4 must stay strictly increasing in radius
// over the frame, otherwise two scene points land on one pixel.
void check_invertible(const CameraModel& cam) {
    const double rc = corner_radius_norm(cam);
    for (int s = 0; s <= 64; ++s) {
        const double r = rc * s / 64.0;
        const double r2 = r * r;
        const double deriv = 1.0 + 3.0 * cam.k1 * r2 + 5.0 * cam.k2 * r2 * r2;
        if (deriv <= 0.0) {
            throw NonInvertible("distortion folds the frame at r=" + fmt_double(r));
        }
    }
}

}  // namespace

PixelPoint distort(const PixelPoint& p, const CameraModel& cam) {
    check_invertible(cam);
    const PixelPoint c = cam.principal_point();
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double r2 = (dx * dx + dy * dy) / (cam.focal_px * cam.focal_px);
    const double gain = 1.0 + cam.k1 * r2 + cam.k2 * r2 * r2;
    return {c.x + dx * gain, c.y + dy * gain};
}

PixelPoint undistort(const PixelPoint& p, const CameraModel& cam) {
    check_invertible(cam);
    const PixelPoint c = cam.principal_point();
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double rd = std::hypot(dx, dy) / cam.focal_px;
    if (rd == 0.0) return p;

    // Newton on g(r) = r (1 + k1 r^2 + k2 r^4) - rd.
    double r = rd;
    for (int it = 0; it < 50; ++it) {
        const double r2 = r * r;
        const double f = r * (1.0 + cam.k1 * r2 + cam.k2 * r2 * r2) - rd;
        const double df = 1.0 + 3.0 * cam.k1 * r2 + 5.0 * cam.k2 * r2 * r2;
        const double step = f / df;
        r -= step;
        if (std::abs(step) < 1e-15) break;
    }
    const double scale = r / rd;
    return {c.x + dx * scale, c.y + dy * scale};
}

const ImageTruth* SceneTruth::find(std::string_view image_id) const {
    for (const ImageTruth& img : images) {
        if (img.image_id == image_id) return &img;
    }
    return nullptr;
}

std::size_t SceneTruth::marker_observations() const {
    std::size_t n = 0;
    for (const ImageTruth& img : images) n += img.markers.size();
    return n;
}

std::vector<TruthObs> flatten(const SceneTruth& truth) {
    std::vector<TruthObs> out;
    for (const ImageTruth& img : truth.images) {
        for (const TruthMarker& m : img.markers) {
            out.push_back({img.image_id, m.marker_id, m.cls, m.gcp, m.px_size, img.altitude_m});
        }
    }
    return out;
}

// --- survey planning ---------------------------------------------------------

SurveyLayout plan_survey(const SurveyPlanConfig& cfg, const CameraModel& cam,
                         std::uint64_t seed) {
    SurveyLayout layout;
    std::mt19937_64 rng = derive_rng(seed, "survey-plan");
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double alt_max = cam.altitude_m;
    for (double a : cfg.altitudes_m) {
        alt_max = std::max(alt_max, a + cfg.altitude_jitter_m);
    }

    // One marker site per marker, spaced so no frame ever sees two sites.
    const double frame_diag_m =
        std::hypot(cam.image_w, cam.image_h) * cam.gsd_at(alt_max);
    const double off_cap_m = cam.image_w / 2.0 * cam.gsd_at(alt_max);
    const double spacing = frame_diag_m + 2.0 * off_cap_m + 50.0;

    const double rot_range = cfg.rotation_range_deg * std::acos(-1.0) / 180.0;
    const int edge_margin_px = 24;

    int image_seq = 0;
    auto next_image_id = [&image_seq]() {
        ++image_seq;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "IMG_%05d", image_seq);
        return std::string(buf);
    };

    for (int m = 0; m < cfg.marker_count; ++m) {
        MarkerPlacement marker;
        marker.marker_id = "GCP" + std::to_string(m + 1);
        marker.cls = kMarkerClasses[static_cast<std::size_t>(m) % kMarkerClasses.size()];
        marker.ground_x = m * spacing;
        marker.ground_y = 0.0;
        marker.side_m = cfg.marker_side_m;
        marker.rotation_rad = (unit(rng) * 2.0 - 1.0) * rot_range;
        layout.markers.push_back(marker);

        std::uniform_int_distribution<int> group_size(cfg.group_min,
                                                      std::max(cfg.group_min, cfg.group_max));
        const int group = group_size(rng);

        for (int obs = 0; obs < group; ++obs) {
            ImagePlan img;
            img.image_id = next_image_id();
            const double band = cfg.altitudes_m.empty()
                                    ? cam.altitude_m
                                    : cfg.altitudes_m[static_cast<std::size_t>(obs) %
                                                      cfg.altitudes_m.size()];
            img.altitude_m = band + (unit(rng) * 2.0 - 1.0) * cfg.altitude_jitter_m;

            const double gsd = cam.gsd_at(img.altitude_m);
            const double safety = marker.side_m * 0.75;
            double cap_x = std::max(0.0, (cam.image_w / 2.0 - edge_margin_px) * gsd - safety);
            double cap_y = std::max(0.0, (cam.image_h / 2.0 - edge_margin_px) * gsd - safety);
            if (obs < cfg.central_per_marker) {
                // keep the marker well inside the low-distortion core
                cap_x = std::min(cap_x, 0.10 * cam.image_w / 2.0 * gsd);
                cap_y = std::min(cap_y, 0.10 * cam.image_h / 2.0 * gsd);
            }
            img.center_x = marker.ground_x + (unit(rng) * 2.0 - 1.0) * cap_x;
            img.center_y = marker.ground_y + (unit(rng) * 2.0 - 1.0) * cap_y;
            layout.images.push_back(img);
        }
    }

    for (int e = 0; e < cfg.empty_images; ++e) {
        ImagePlan img;
        img.image_id = next_image_id();
        const double band = cfg.altitudes_m.empty()
                                ? cam.altitude_m
                                : cfg.altitudes_m[static_cast<std::size_t>(e) %
                                                  cfg.altitudes_m.size()];
        img.altitude_m = band + (unit(rng) * 2.0 - 1.0) * cfg.altitude_jitter_m;
        img.center_x = e * spacing;
        img.center_y = -2.0 * spacing;  // own row, far from every marker
        layout.images.push_back(img);
    }
    return layout;
}

// --- projection and rendering ------------------------------------------------

namespace {

PixelPoint project_ground(double gx, double gy, const ImagePlan& img, const CameraModel& cam) {
    const double gsd = cam.gsd_at(img.altitude_m);
    return {cam.image_w / 2.0 + (gx - img.center_x) / gsd,
            cam.image_h / 2.0 + (gy - img.center_y) / gsd};
}

std::array<PixelPoint, 4> marker_corners_ground(const MarkerPlacement& m) {
    const double h = m.side_m / 2.0;
    const double cr = std::cos(m.rotation_rad);
    const double sr = std::sin(m.rotation_rad);
    std::array<std::pair<double, double>, 4> local = {
        {{-h, -h}, {h, -h}, {h, h}, {-h, h}}};
    std::array<PixelPoint, 4> out;
    for (std::size_t k = 0; k < 4; ++k) {
        const double lx = local[k].first;
        const double ly = local[k].second;
        out[k] = {m.ground_x + lx * cr - ly * sr, m.ground_y + lx * sr + ly * cr};
    }
    return out;
}

// Shape outline in marker-local meters, before rotation. The L hugs two
// edges of the bounding square with its corner on the class corner; the
// cross is a centered plus sign. Cosmetic only; the truth is the corners.
std::vector<std::pair<double, double>> marker_outline(MarkerClass cls, double side) {
    const double h = side / 2.0;
    const double t = side / 5.0;
    std::vector<std::pair<double, double>> pts;
    if (cls == MarkerClass::Cross) {
        pts = {{-h, -t / 2}, {-t / 2, -t / 2}, {-t / 2, -h}, {t / 2, -h},
               {t / 2, -t / 2}, {h, -t / 2},   {h, t / 2},   {t / 2, t / 2},
               {t / 2, h},      {-t / 2, h},   {-t / 2, t / 2}, {-h, t / 2}};
        return pts;
    }
    // L for the top-left case, mirrored for the others.
    pts = {{-h, -h}, {h, -h}, {h, -h + t}, {-h + t, -h + t}, {-h + t, h}, {-h, h}};
    double mx = 1.0, my = 1.0;
    if (cls == MarkerClass::TopRight) mx = -1.0;
    if (cls == MarkerClass::BottomLeft) my = -1.0;
    if (cls == MarkerClass::BottomRight) { mx = -1.0; my = -1.0; }
    for (auto& p : pts) {
        p.first *= mx;
        p.second *= my;
    }
    return pts;
}

void render_frame(cv::Mat& canvas, const ImagePlan& img, const std::vector<MarkerPlacement>& markers,
                  const CameraModel& cam, std::uint64_t seed, const RenderOptions& opts) {
    cv::RNG cvrng(derive_rng(seed, "render-bg", img.image_id)());
    cvrng.fill(canvas, cv::RNG::UNIFORM, cv::Scalar(46, 52, 48), cv::Scalar(96, 104, 98));

    if (opts.confusers) {
        for (int c = 0; c < opts.confusers_per_image; ++c) {
            const int w = cvrng.uniform(8, 40);
            const int h = cvrng.uniform(8, 40);
            const int x = cvrng.uniform(0, std::max(1, cam.image_w - w));
            const int y = cvrng.uniform(0, std::max(1, cam.image_h - h));
            cv::rectangle(canvas, {x, y}, {x + w, y + h}, cv::Scalar(228, 230, 226), cv::FILLED);
        }
    }

    for (const MarkerPlacement& m : markers) {
        const double cr = std::cos(m.rotation_rad);
        const double sr = std::sin(m.rotation_rad);
        std::vector<cv::Point> poly;
        bool visible = false;
        for (const auto& [lx, ly] : marker_outline(m.cls, m.side_m)) {
            const double gx = m.ground_x + lx * cr - ly * sr;
            const double gy = m.ground_y + lx * sr + ly * cr;
            const PixelPoint px = distort(project_ground(gx, gy, img, cam), cam);
            poly.emplace_back(cv::saturate_cast<int>(std::lround(px.x)),
                              cv::saturate_cast<int>(std::lround(px.y)));
            if (px.x >= 0 && px.x < cam.image_w && px.y >= 0 && px.y < cam.image_h) {
                visible = true;
            }
        }
        if (visible) {
            cv::fillPoly(canvas, std::vector<std::vector<cv::Point>>{poly},
                         cv::Scalar(238, 240, 236));
        }
    }
}

}  // namespace

SceneTruth render_survey(const SurveyLayout& layout, const CameraModel& cam, std::uint64_t seed,
                         const RasterSink& sink, const RenderOptions& opts) {
    check_invertible(cam);
    SceneTruth truth;
    truth.images.reserve(layout.images.size());

    for (const ImagePlan& img : layout.images) {
        ImageTruth it;
        it.image_id = img.image_id;
        it.altitude_m = img.altitude_m;

        for (const MarkerPlacement& m : layout.markers) {
            const std::array<PixelPoint, 4> ground = marker_corners_ground(m);
            std::array<PixelPoint, 4> px;
            int inside = 0;
            for (std::size_t k = 0; k < 4; ++k) {
                px[k] = distort(project_ground(ground[k].x, ground[k].y, img, cam), cam);
                if (px[k].x >= 0.0 && px[k].x < cam.image_w && px[k].y >= 0.0 &&
                    px[k].y < cam.image_h) {
                    ++inside;
                }
            }
            if (inside == 0) continue;  // not in this footprint
            if (inside < 4) {
                truth.warnings.push_back("marker " + m.marker_id + " partially out of frame in " +
                                         img.image_id);
                continue;
            }
            TruthMarker tm;
            tm.marker_id = m.marker_id;
            tm.cls = m.cls;
            tm.box = canonicalize(px);
            tm.gcp = gcp_vertex(tm.box, m.cls);
            tm.px_size = marker_pixel_size(m.side_m, img.altitude_m, cam);
            it.markers.push_back(std::move(tm));
        }
        truth.images.push_back(std::move(it));

        if (sink) {
            cv::Mat canvas(cam.image_h, cam.image_w, CV_8UC3);
            render_frame(canvas, img, layout.markers, cam, seed, opts);
            sink(img.image_id, canvas);
        }
    }
    return truth;
}

// --- persistence --------------------------------------------------------------

void save_scene_truth(const std::filesystem::path& path, const SceneTruth& truth) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << "image_id,marker_id,class_code,x1,y1,x2,y2,x3,y3,x4,y4,gcp_x,gcp_y,px_size\n";
    for (const ImageTruth& img : truth.images) {
        for (const TruthMarker& m : img.markers) {
            out << img.image_id << ',' << m.marker_id << ',' << class_code(m.cls);
            for (const PixelPoint& p : m.box.v) {
                out << ',' << fmt_double(p.x) << ',' << fmt_double(p.y);
            }
            out << ',' << fmt_double(m.gcp.x) << ',' << fmt_double(m.gcp.y) << ','
                << fmt_double(m.px_size) << '\n';
        }
    }
}

SceneTruth load_scene_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path.string());

    SceneTruth truth;
    std::map<std::string, std::size_t> by_id;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("image_id,", 0) == 0) continue;
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != 14) {
            throw ParseError("expected 14 fields, got " + std::to_string(f.size()), line_no);
        }
        TruthMarker m;
        m.marker_id = f[1];
        m.cls = class_from_code(f[2]);
        std::array<PixelPoint, 4> v;
        for (std::size_t k = 0; k < 4; ++k) {
            v[k].x = parse_double(f[3 + 2 * k], "vertex x", line_no);
            v[k].y = parse_double(f[4 + 2 * k], "vertex y", line_no);
        }
        m.box = canonicalize(v);
        m.gcp = {parse_double(f[11], "gcp_x", line_no), parse_double(f[12], "gcp_y", line_no)};
        m.px_size = parse_double(f[13], "px_size", line_no);
        if (distance(m.gcp, gcp_vertex(m.box, m.cls)) > 1e-6) {
            throw ParseError("gcp does not match the class vertex of the box", line_no);
        }

        auto [it, inserted] = by_id.try_emplace(f[0], truth.images.size());
        if (inserted) {
            truth.images.push_back(ImageTruth{f[0], 0.0, {}});
        }
        truth.images[it->second].markers.push_back(std::move(m));
    }
    return truth;
}

void save_flightplan(const std::filesystem::path& path, const SurveyLayout& layout,
                     const CameraModel& cam, double marker_side_m) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << "format_version 1\n";
    out << "image_w " << cam.image_w << "\n";
    out << "image_h " << cam.image_h << "\n";
    out << "focal_px " << fmt_double(cam.focal_px) << "\n";
    out << "k1 " << fmt_double(cam.k1) << "\n";
    out << "k2 " << fmt_double(cam.k2) << "\n";
    out << "altitude_m " << fmt_double(cam.altitude_m) << "\n";
    out << "marker_side_m " << fmt_double(marker_side_m) << "\n";
    for (const ImagePlan& img : layout.images) {
        out << "image " << img.image_id << ' ' << fmt_double(img.altitude_m) << ' '
            << fmt_double(img.center_x) << ' ' << fmt_double(img.center_y) << "\n";
    }
}

Flightplan load_flightplan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path.string());
    Flightplan plan;
    std::string line;
    std::size_t line_no = 0;
    bool version_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "format_version") {
            int v = 0;
            ss >> v;
            if (v != 1) throw FormatError("unsupported flightplan format_version");
            version_seen = true;
        } else if (key == "image_w") {
            ss >> plan.camera.image_w;
        } else if (key == "image_h") {
            ss >> plan.camera.image_h;
        } else if (key == "focal_px") {
            ss >> plan.camera.focal_px;
        } else if (key == "k1") {
            ss >> plan.camera.k1;
        } else if (key == "k2") {
            ss >> plan.camera.k2;
        } else if (key == "altitude_m") {
            ss >> plan.camera.altitude_m;
        } else if (key == "marker_side_m") {
            ss >> plan.marker_side_m;
        } else if (key == "image") {
            ImagePlan img;
            ss >> img.image_id >> img.altitude_m >> img.center_x >> img.center_y;
            plan.images.push_back(img);
        } else {
            throw ParseError("unknown flightplan key '" + key + "'", line_no);
        }
        if (ss.fail()) throw ParseError("malformed flightplan line", line_no);
    }
    if (!version_seen) throw FormatError("flightplan missing format_version");
    return plan;
}

void apply_flightplan(SceneTruth& truth, const Flightplan& plan) {
    SceneTruth merged;
    merged.warnings = truth.warnings;
    merged.images.reserve(plan.images.size());
    for (const ImagePlan& img : plan.images) {
        ImageTruth it;
        it.image_id = img.image_id;
        it.altitude_m = img.altitude_m;
        if (const ImageTruth* have = truth.find(img.image_id)) {
            it.markers = have->markers;
        }
        merged.images.push_back(std::move(it));
    }
    truth = std::move(merged);
}

}  // namespace gcp
