#include "gcplocate/filter.hpp"

#include "gcplocate/csv.hpp"
#include "gcplocate/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace gcp {

std::vector<GcpCandidate> apply_threshold(const std::vector<GcpCandidate>& cands, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw BadThreshold("threshold " + fmt_double(t) + " outside [0,1]");
    }
    std::vector<GcpCandidate> out;
    out.reserve(cands.size());
    for (const GcpCandidate& c : cands) {
        if (c.confidence >= t) out.push_back(c);
    }
    return out;
}

namespace {

bool covers(const GcpCandidate& c, const TruthObs& obs, const MatchRule& rule) {
    if (c.image_id != obs.image_id) return false;
    if (rule.class_aware && c.cls != obs.cls) return false;
    return distance(c.position, obs.gcp) <= rule.epsilon;
}

std::set<std::string> images_with_candidates(const std::vector<GcpCandidate>& cands) {
    std::set<std::string> ids;
    for (const GcpCandidate& c : cands) ids.insert(c.image_id);
    return ids;
}

}  // namespace

std::optional<double> image_precision(const std::vector<GcpCandidate>& cands,
                                      const SceneTruth& truth) {
    int tp = 0;
    int fp = 0;
    for (const std::string& id : images_with_candidates(cands)) {
        const ImageTruth* img = truth.find(id);
        const bool has_marker = img != nullptr && !img->markers.empty();
        if (has_marker) {
            ++tp;
        } else {
            ++fp;
        }
    }
    if (tp + fp == 0) return std::nullopt;
    return static_cast<double>(tp) / (tp + fp);
}

std::optional<double> detection_precision(const std::vector<GcpCandidate>& cands,
                                          const SceneTruth& truth, const MatchRule& rule) {
    if (cands.empty()) return std::nullopt;
    const std::vector<TruthObs> obs = flatten(truth);
    int tp = 0;
    for (const GcpCandidate& c : cands) {
        for (const TruthObs& o : obs) {
            if (covers(c, o, rule)) {
                ++tp;
                break;
            }
        }
    }
    return static_cast<double>(tp) / static_cast<double>(cands.size());
}

namespace {

std::vector<bool> coverage(const std::vector<TruthObs>& obs, const std::vector<GcpCandidate>& cands,
                           const MatchRule& rule) {
    // Group candidates per image to avoid the full cross product.
    std::unordered_map<std::string, std::vector<const GcpCandidate*>> by_image;
    for (const GcpCandidate& c : cands) by_image[c.image_id].push_back(&c);

    std::vector<bool> covered(obs.size(), false);
    for (std::size_t k = 0; k < obs.size(); ++k) {
        auto it = by_image.find(obs[k].image_id);
        if (it == by_image.end()) continue;
        for (const GcpCandidate* c : it->second) {
            if (covers(*c, obs[k], rule)) {
                covered[k] = true;
                break;
            }
        }
    }
    return covered;
}

}  // namespace

std::optional<double> loss_ratio(const std::vector<GcpCandidate>& before,
                                 const std::vector<GcpCandidate>& after, const SceneTruth& truth,
                                 const MatchRule& rule) {
    const std::vector<TruthObs> obs = flatten(truth);
    if (obs.empty()) return std::nullopt;
    const std::vector<bool> cov_before = coverage(obs, before, rule);
    const std::vector<bool> cov_after = coverage(obs, after, rule);
    int lost = 0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
        if (cov_before[k] && !cov_after[k]) ++lost;
    }
    return static_cast<double>(lost) / static_cast<double>(obs.size());
}

std::vector<ThresholdReport> sweep(const std::vector<GcpCandidate>& cands, const SceneTruth* truth,
                                   const std::vector<double>& thresholds, const MatchRule& rule) {
    std::vector<TruthObs> obs;
    std::vector<bool> cov_before;
    if (truth != nullptr) {
        obs = flatten(*truth);
        cov_before = coverage(obs, cands, rule);
    }

    std::vector<ThresholdReport> reports;
    reports.reserve(thresholds.size());
    for (double t : thresholds) {
        ThresholdReport r;
        r.threshold = t;
        const std::vector<GcpCandidate> kept = apply_threshold(cands, t);
        r.images_retained = static_cast<int>(images_with_candidates(kept).size());
        if (truth != nullptr) {
            r.precision = image_precision(kept, *truth);
            if (!obs.empty()) {
                const std::vector<bool> cov_after = coverage(obs, kept, rule);
                int lost = 0;
                for (std::size_t k = 0; k < obs.size(); ++k) {
                    if (cov_before[k] && !cov_after[k]) ++lost;
                }
                r.true_gcps_lost = lost;
                r.loss_ratio = static_cast<double>(lost) / static_cast<double>(obs.size());
            }
        }
        reports.push_back(r);
    }
    return reports;
}

std::vector<double> threshold_grid(double from, double to, double step) {
    if (step <= 0.0) throw BadThreshold("step must be positive");
    // nanodecimal lattice, so 0.05-step grids print as 0.15 and not as
    // 0.15000000000000002
    const long long from_n = std::llround(from * 1e9);
    const long long to_n = std::llround(to * 1e9);
    const long long step_n = std::llround(step * 1e9);
    if (step_n <= 0) throw BadThreshold("step must be at least 1e-9");
    std::vector<double> grid;
    for (long long t = from_n; t <= to_n; t += step_n) {
        grid.push_back(static_cast<double>(t) / 1e9);
    }
    return grid;
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<ThresholdReport>& reports) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "threshold,precision,loss_ratio,images_retained,gcps_lost\n";
    for (const ThresholdReport& r : reports) {
        out << fmt_double(r.threshold) << ',';
        if (r.precision) out << fmt_double(*r.precision);
        out << ',';
        if (r.loss_ratio) out << fmt_double(*r.loss_ratio);
        out << ',' << r.images_retained << ',';
        if (r.true_gcps_lost) out << *r.true_gcps_lost;
        out << '\n';
    }
}

void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<ThresholdReport>& reports) {
    SvgSeries precision{"precision", "#1f77b4", {}, true};
    SvgSeries loss{"loss ratio", "#d62728", {}, true};
    for (const ThresholdReport& r : reports) {
        if (r.precision) precision.points.emplace_back(r.threshold, *r.precision);
        if (r.loss_ratio) loss.points.emplace_back(r.threshold, *r.loss_ratio);
    }
    SvgAxes axes;
    axes.title = "Precision and loss ratio vs confidence threshold";
    axes.x_label = "confidence threshold";
    axes.y_label = "ratio";
    axes.x_min = 0.0;
    axes.x_max = 1.0;
    axes.y_min = 0.0;
    axes.y_max = 1.05;
    axes.fixed_range = true;
    write_svg_plot(path, axes, {precision, loss});
}

}  // namespace gcp
