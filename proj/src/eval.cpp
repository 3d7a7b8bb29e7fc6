#include "gcplocate/eval.hpp"

#include "gcplocate/csv.hpp"
#include "gcplocate/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

namespace gcp {

MatchResult match(const std::vector<GcpCandidate>& cands, const std::vector<TruthObs>& truths,
                  double epsilon, bool class_aware) {
    struct Edge {
        double dist;
        std::size_t cand;
        std::size_t truth;
    };
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < cands.size(); ++c) {
        for (std::size_t t = 0; t < truths.size(); ++t) {
            if (class_aware && cands[c].cls != truths[t].cls) continue;
            const double d = distance(cands[c].position, truths[t].gcp);
            if (d <= epsilon) edges.push_back({d, c, t});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.cand != b.cand) return a.cand < b.cand;
        return a.truth < b.truth;
    });

    std::vector<bool> cand_used(cands.size(), false);
    std::vector<bool> truth_used(truths.size(), false);
    MatchResult result;
    for (const Edge& e : edges) {
        if (cand_used[e.cand] || truth_used[e.truth]) continue;
        cand_used[e.cand] = true;
        truth_used[e.truth] = true;
        MatchedPair pair;
        pair.cand = cands[e.cand];
        pair.truth = truths[e.truth];
        pair.dx = pair.cand.position.x - pair.truth.gcp.x;
        pair.dy = pair.cand.position.y - pair.truth.gcp.y;
        pair.error = e.dist;
        result.pairs.push_back(std::move(pair));
    }
    for (std::size_t c = 0; c < cands.size(); ++c) {
        if (!cand_used[c]) result.unmatched_candidates.push_back(cands[c]);
    }
    for (std::size_t t = 0; t < truths.size(); ++t) {
        if (!truth_used[t]) result.unmatched_truths.push_back(truths[t]);
    }
    return result;
}

MatchResult match_survey(const std::vector<GcpCandidate>& cands, const SceneTruth& truth,
                         const MatchRule& rule) {
    std::unordered_map<std::string, std::vector<GcpCandidate>> cands_by_image;
    for (const GcpCandidate& c : cands) cands_by_image[c.image_id].push_back(c);

    MatchResult all;
    for (const ImageTruth& img : truth.images) {
        std::vector<TruthObs> obs;
        for (const TruthMarker& m : img.markers) {
            obs.push_back({img.image_id, m.marker_id, m.cls, m.gcp, m.px_size, img.altitude_m});
        }
        std::vector<GcpCandidate> in_image;
        if (auto it = cands_by_image.find(img.image_id); it != cands_by_image.end()) {
            in_image = std::move(it->second);
            cands_by_image.erase(it);
        }
        MatchResult r = match(in_image, obs, rule.epsilon, rule.class_aware);
        std::move(r.pairs.begin(), r.pairs.end(), std::back_inserter(all.pairs));
        std::move(r.unmatched_candidates.begin(), r.unmatched_candidates.end(),
                  std::back_inserter(all.unmatched_candidates));
        std::move(r.unmatched_truths.begin(), r.unmatched_truths.end(),
                  std::back_inserter(all.unmatched_truths));
    }
    // Candidates in images the truth has never heard of are false positives.
    for (auto& [id, rest] : cands_by_image) {
        std::move(rest.begin(), rest.end(), std::back_inserter(all.unmatched_candidates));
    }
    return all;
}

ErrorStats error_stats(const MatchResult& result) {
    if (result.pairs.empty()) throw NoMatches("no matched pairs to summarize");
    ErrorStats stats;
    stats.pairs = result.pairs.size();
    double sum = 0.0;
    std::array<std::size_t, 4> counts{};
    for (const MatchedPair& p : result.pairs) {
        stats.max_error = std::max(stats.max_error, p.error);
        sum += p.error;
        for (int px = 1; px <= 4; ++px) {
            if (p.error <= px) ++counts[static_cast<std::size_t>(px - 1)];
        }
    }
    stats.mean_error = sum / static_cast<double>(stats.pairs);
    for (std::size_t k = 0; k < 4; ++k) {
        stats.within_px[k] = static_cast<double>(counts[k]) / static_cast<double>(stats.pairs);
    }
    return stats;
}

std::vector<BandRow> band_report(const MatchResult& result, const SceneTruth& truth,
                                 const std::vector<double>& band_edges) {
    std::unordered_map<std::string, double> altitude;
    for (const ImageTruth& img : truth.images) altitude[img.image_id] = img.altitude_m;

    const std::size_t bands = band_edges.size() >= 2 ? band_edges.size() - 1 : 0;
    std::vector<BandRow> rows(bands);
    std::vector<double> px_sum(bands, 0.0);
    std::vector<int> px_n(bands, 0);
    for (std::size_t b = 0; b < bands; ++b) {
        rows[b].alt_lo = band_edges[b];
        rows[b].alt_hi = band_edges[b + 1];
    }

    auto band_of = [&](const std::string& image_id) -> int {
        auto it = altitude.find(image_id);
        if (it == altitude.end()) return -1;
        for (std::size_t b = 0; b < bands; ++b) {
            if (it->second >= band_edges[b] && it->second < band_edges[b + 1]) {
                return static_cast<int>(b);
            }
        }
        return -1;
    };

    for (const MatchedPair& p : result.pairs) {
        const int b = band_of(p.cand.image_id);
        if (b < 0) continue;
        ++rows[static_cast<std::size_t>(b)].tp;
        ++rows[static_cast<std::size_t>(b)].markers;
        px_sum[static_cast<std::size_t>(b)] += p.truth.px_size;
        ++px_n[static_cast<std::size_t>(b)];
    }
    for (const TruthObs& t : result.unmatched_truths) {
        const int b = band_of(t.image_id);
        if (b < 0) continue;
        ++rows[static_cast<std::size_t>(b)].fn;
        ++rows[static_cast<std::size_t>(b)].markers;
        px_sum[static_cast<std::size_t>(b)] += t.px_size;
        ++px_n[static_cast<std::size_t>(b)];
    }
    for (const GcpCandidate& c : result.unmatched_candidates) {
        const int b = band_of(c.image_id);
        if (b < 0) continue;
        ++rows[static_cast<std::size_t>(b)].fp;
    }

    std::vector<BandRow> present;
    for (std::size_t b = 0; b < bands; ++b) {
        BandRow& r = rows[b];
        if (r.markers == 0 && r.fp == 0) continue;  // empty band: no row
        if (r.tp + r.fp > 0) r.precision = static_cast<double>(r.tp) / (r.tp + r.fp);
        if (r.tp + r.fn > 0) r.recall = static_cast<double>(r.tp) / (r.tp + r.fn);
        if (px_n[b] > 0) r.mean_px_size = px_sum[b] / px_n[b];
        present.push_back(r);
    }
    return present;
}

std::vector<RankingRow> ranking_report(const std::vector<GcpGroup>& ranked,
                                       const SceneTruth& truth, const std::vector<int>& k_list,
                                       const MatchRule& rule) {
    // (marker, image) -> truth position, for the is-this-member-real test
    std::map<std::pair<std::string, std::string>, const TruthMarker*> by_key;
    for (const ImageTruth& img : truth.images) {
        for (const TruthMarker& m : img.markers) {
            by_key[{m.marker_id, img.image_id}] = &m;
        }
    }

    int max_k = 0;
    for (int k : k_list) max_k = std::max(max_k, k);

    std::vector<RankingRow> rows;
    for (const GcpGroup& g : ranked) {
        RankingRow row;
        row.marker_id = g.marker_id;
        row.group_size = static_cast<int>(g.members.size());
        row.short_group = row.group_size < max_k;

        std::vector<bool> is_true(g.members.size(), false);
        for (std::size_t m = 0; m < g.members.size(); ++m) {
            const GcpCandidate& c = g.members[m].candidate;
            auto it = by_key.find({g.marker_id, c.image_id});
            if (it == by_key.end()) continue;
            if (rule.class_aware && it->second->cls != c.cls) continue;
            is_true[m] = distance(c.position, it->second->gcp) <= rule.epsilon;
        }

        for (int k : k_list) {
            const std::size_t depth =
                std::min(g.members.size(), static_cast<std::size_t>(std::max(k, 0)));
            if (depth == 0) continue;
            std::size_t truths = 0;
            std::size_t central = 0;
            for (std::size_t m = 0; m < depth; ++m) {
                if (is_true[m]) ++truths;
                if (g.members[m].centrality > kCentralityCutoff) ++central;
            }
            row.k.push_back(k);
            row.precision_k.push_back(static_cast<double>(truths) / static_cast<double>(depth));
            row.pona_k.push_back(static_cast<double>(central) / static_cast<double>(depth));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// --- report files -------------------------------------------------------------

void write_error_stats_csv(const std::filesystem::path& path, const ErrorStats& stats) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "pairs,max_error,mean_error,within_1px,within_2px,within_3px,within_4px\n";
    out << stats.pairs << ',' << fmt_double(stats.max_error) << ',' << fmt_double(stats.mean_error);
    for (double f : stats.within_px) out << ',' << fmt_double(f);
    out << '\n';
}

void write_error_scatter_csv(const std::filesystem::path& path, const MatchResult& result) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "image_id,marker_id,dx,dy,error\n";
    for (const MatchedPair& p : result.pairs) {
        out << p.cand.image_id << ',' << p.truth.marker_id << ',' << fmt_double(p.dx) << ','
            << fmt_double(p.dy) << ',' << fmt_double(p.error) << '\n';
    }
}

void write_error_scatter_svg(const std::filesystem::path& path, const MatchResult& result) {
    SvgSeries dots{"per-observation error", "#2ca02c", {}, false};
    double extent = 1.0;
    for (const MatchedPair& p : result.pairs) {
        dots.points.emplace_back(p.dx, p.dy);
        extent = std::max({extent, std::abs(p.dx), std::abs(p.dy)});
    }
    extent = std::ceil(extent);
    SvgAxes axes;
    axes.title = "GCP position error";
    axes.x_label = "dx (px)";
    axes.y_label = "dy (px)";
    axes.x_min = -extent;
    axes.x_max = extent;
    axes.y_min = -extent;
    axes.y_max = extent;
    axes.fixed_range = true;
    write_svg_plot(path, axes, {dots});
}

void write_band_report_csv(const std::filesystem::path& path, const std::vector<BandRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "altitude_lo,altitude_hi,gcp_markers,tp,fp,fn,precision,recall,avg_px_size\n";
    for (const BandRow& r : rows) {
        out << fmt_double(r.alt_lo) << ',' << fmt_double(r.alt_hi) << ',' << r.markers << ','
            << r.tp << ',' << r.fp << ',' << r.fn << ',';
        if (r.precision) out << fmt_double(*r.precision);
        out << ',';
        if (r.recall) out << fmt_double(*r.recall);
        out << ',';
        if (r.mean_px_size) out << fmt_fixed(*r.mean_px_size, 1);
        out << '\n';
    }
}

void write_ranking_report_csv(const std::filesystem::path& path,
                              const std::vector<RankingRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "marker_id,group_size,k,precision,pona,short_group\n";
    for (const RankingRow& r : rows) {
        for (std::size_t q = 0; q < r.k.size(); ++q) {
            out << r.marker_id << ',' << r.group_size << ',' << r.k[q] << ','
                << fmt_double(r.precision_k[q]) << ',' << fmt_double(r.pona_k[q]) << ','
                << (r.short_group ? "yes" : "no") << '\n';
        }
    }
}

}  // namespace gcp
