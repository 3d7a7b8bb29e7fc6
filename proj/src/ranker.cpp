#include "gcplocate/ranker.hpp"

#include "gcplocate/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace gcp {

std::pair<double, double> distortion_distance(const PixelPoint& p, int image_w, int image_h) {
    const double cx = image_w / 2.0;
    const double cy = image_h / 2.0;
    return {std::hypot(p.x - cx, p.y - cy), std::hypot(cx, cy)};
}

ScoredCandidate score(const GcpCandidate& cand, int image_w, int image_h, double sigma) {
    if (!(sigma > 0.0)) {
        throw BadSigma("sigma must be positive, got " + fmt_double(sigma));
    }
    ScoredCandidate s;
    s.candidate = cand;
    auto [d, d_max] = distortion_distance(cand.position, image_w, image_h);
    s.d = d;
    s.d_max = d_max;
    s.centrality = 1.0 - d / d_max;
    s.score = sigma * s.centrality + cand.confidence;
    return s;
}

namespace {

bool rank_before(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.candidate.confidence != b.candidate.confidence) {
        return a.candidate.confidence > b.candidate.confidence;
    }
    return a.candidate.image_id < b.candidate.image_id;
}

}  // namespace

GcpGroup rank_group(GcpGroup group) {
    std::stable_sort(group.members.begin(), group.members.end(), rank_before);
    return group;
}

std::vector<ScoredCandidate> select_top_k(const GcpGroup& group, int k) {
    if (k < 1) throw std::invalid_argument("top-k requires k >= 1");
    GcpGroup ranked = rank_group(group);
    const std::size_t n = std::min(ranked.members.size(), static_cast<std::size_t>(k));
    return {ranked.members.begin(), ranked.members.begin() + static_cast<std::ptrdiff_t>(n)};
}

double pona(std::span<const ScoredCandidate> selected) {
    if (selected.empty()) throw EmptySelection("PONA over an empty selection");
    std::size_t central = 0;
    for (const ScoredCandidate& s : selected) {
        if (s.centrality > kCentralityCutoff) ++central;
    }
    return static_cast<double>(central) / static_cast<double>(selected.size());
}

std::vector<MarkerAnchor> anchors_from_truth(const SceneTruth& truth) {
    std::vector<MarkerAnchor> anchors;
    for (const ImageTruth& img : truth.images) {
        for (const TruthMarker& m : img.markers) {
            anchors.push_back({m.marker_id, img.image_id, m.gcp});
        }
    }
    return anchors;
}

std::vector<MarkerAnchor> load_association_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path.string(), 0);
    std::vector<MarkerAnchor> anchors;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line.rfind("marker_id,", 0) == 0) continue;
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != 4) {
            throw ParseError("expected 4 fields, got " + std::to_string(f.size()), line_no);
        }
        MarkerAnchor a;
        a.marker_id = f[0];
        a.image_id = f[1];
        a.position.x = parse_double(f[2], "x", line_no);
        a.position.y = parse_double(f[3], "y", line_no);
        anchors.push_back(std::move(a));
    }
    return anchors;
}

std::vector<GcpGroup> group_candidates(const std::vector<GcpCandidate>& cands,
                                       const std::vector<MarkerAnchor>& anchors, double radius,
                                       int image_w, int image_h, double sigma) {
    std::map<std::string, GcpGroup> groups;
    for (const GcpCandidate& c : cands) {
        const MarkerAnchor* best = nullptr;
        double best_d = radius;
        for (const MarkerAnchor& a : anchors) {
            if (a.image_id != c.image_id) continue;
            const double d = distance(a.position, c.position);
            if (d <= best_d) {
                best_d = d;
                best = &a;
            }
        }
        if (best == nullptr) continue;
        GcpGroup& g = groups[best->marker_id];
        g.marker_id = best->marker_id;
        g.members.push_back(score(c, image_w, image_h, sigma));
    }

    std::vector<GcpGroup> out;
    out.reserve(groups.size());
    for (auto& [id, g] : groups) out.push_back(std::move(g));
    return out;
}

void save_selection_csv(const std::filesystem::path& path, const std::vector<GcpGroup>& ranked,
                        int k) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "marker_id,rank,image_id,x,y,score,confidence,centrality\n";
    for (const GcpGroup& g : ranked) {
        const std::size_t n = std::min(g.members.size(), static_cast<std::size_t>(std::max(k, 0)));
        for (std::size_t r = 0; r < n; ++r) {
            const ScoredCandidate& s = g.members[r];
            out << g.marker_id << ',' << (r + 1) << ',' << s.candidate.image_id << ','
                << fmt_fixed(s.candidate.position.x, 2) << ','
                << fmt_fixed(s.candidate.position.y, 2) << ',' << fmt_double(s.score) << ','
                << fmt_double(s.candidate.confidence) << ',' << fmt_double(s.centrality) << '\n';
        }
    }
}

}  // namespace gcp
