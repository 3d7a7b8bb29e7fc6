#include "gcplocate/locator.hpp"

#include "gcplocate/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace gcp {

GcpCandidate locate(const Detection& det, const TileGrid& grid) {
    if (!grid.contains(det.tile)) {
        throw OutOfTile("detection in tile (" + std::to_string(det.tile.i) + "," +
                        std::to_string(det.tile.j) + ") outside grid");
    }
    const double ox = grid.origin_x(det.tile);
    const double oy = grid.origin_y(det.tile);

    // The tile offset is applied per vertex, one addition per axis, before
    // vertex selection; canonical order is translation-invariant, so the
    // shifted box stays canonical and the cross centroid is computed on the
    // same values the truth would use.
    OrientedBox global_box;
    int vertices_in_pad = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        const PixelPoint& p = det.box.v[k];
        const double tol = kTileExcursionTolerance;
        if (p.x < -tol || p.x > grid.tile_w + tol || p.y < -tol || p.y > grid.tile_h + tol) {
            throw OutOfTile("box vertex beyond the tolerated tile excursion");
        }
        global_box.v[k] = {ox + p.x, oy + p.y};
        if (global_box.v[k].x >= grid.image_w || global_box.v[k].y >= grid.image_h) {
            ++vertices_in_pad;
        }
    }
    if (vertices_in_pad == 4) {
        throw PadRegionOnly("box of " + det.image_id + " tile (" + std::to_string(det.tile.i) +
                            "," + std::to_string(det.tile.j) + ") lies entirely in padding");
    }

    GcpCandidate cand;
    cand.image_id = det.image_id;
    cand.cls = det.cls;
    cand.confidence = det.confidence;
    cand.source_tile = det.tile;
    cand.position = gcp_vertex(global_box, det.cls);

    // Positions must stay inside the real image; anything in the pad band or
    // past the origin is pulled to the edge and flagged.
    const double max_x = grid.image_w - 0.01;
    const double max_y = grid.image_h - 0.01;
    if (cand.position.x < 0.0 || cand.position.x > max_x || cand.position.y < 0.0 ||
        cand.position.y > max_y) {
        cand.position.x = std::clamp(cand.position.x, 0.0, max_x);
        cand.position.y = std::clamp(cand.position.y, 0.0, max_y);
        cand.clipped = true;
    }
    return cand;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

bool better_survivor(const GcpCandidate& a, const GcpCandidate& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.position.y != b.position.y) return a.position.y < b.position.y;
    return a.position.x < b.position.x;
}

bool canonical_order(const GcpCandidate& a, const GcpCandidate& b) {
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    if (a.cls != b.cls) return a.cls < b.cls;
    if (a.position.y != b.position.y) return a.position.y < b.position.y;
    if (a.position.x != b.position.x) return a.position.x < b.position.x;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.source_tile.i != b.source_tile.i) return a.source_tile.i < b.source_tile.i;
    return a.source_tile.j < b.source_tile.j;
}

}  // namespace

std::vector<GcpCandidate> dedupe_seams(std::vector<GcpCandidate> cands, double radius) {
    // Sorting first makes the result independent of input order.
    std::sort(cands.begin(), cands.end(), canonical_order);

    UnionFind uf(cands.size());
    for (std::size_t a = 0; a < cands.size(); ++a) {
        for (std::size_t b = a + 1; b < cands.size(); ++b) {
            if (cands[a].image_id != cands[b].image_id || cands[a].cls != cands[b].cls) continue;
            if (distance(cands[a].position, cands[b].position) <= radius) uf.unite(a, b);
        }
    }

    std::vector<std::size_t> winner(cands.size(), SIZE_MAX);
    for (std::size_t k = 0; k < cands.size(); ++k) {
        const std::size_t root = uf.find(k);
        if (winner[root] == SIZE_MAX || better_survivor(cands[k], cands[winner[root]])) {
            winner[root] = k;
        }
    }

    std::vector<GcpCandidate> out;
    out.reserve(cands.size());
    for (std::size_t k = 0; k < cands.size(); ++k) {
        if (winner[uf.find(k)] == k) out.push_back(cands[k]);
    }
    std::sort(out.begin(), out.end(), canonical_order);
    return out;
}

void save_candidates_csv(const std::filesystem::path& path,
                         const std::vector<GcpCandidate>& cands) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "image_id,x,y,class_code,confidence,tile_i,tile_j\n";
    for (const GcpCandidate& c : cands) {
        out << c.image_id << ',' << fmt_fixed(c.position.x, 2) << ',' << fmt_fixed(c.position.y, 2)
            << ',' << class_code(c.cls) << ',' << fmt_double(c.confidence) << ','
            << c.source_tile.i << ',' << c.source_tile.j << '\n';
    }
}

std::vector<GcpCandidate> load_candidates_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path.string(), 0);
    std::vector<GcpCandidate> cands;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line.rfind("image_id,", 0) == 0) continue;
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != 7) {
            throw ParseError("expected 7 fields, got " + std::to_string(f.size()), line_no);
        }
        GcpCandidate c;
        c.image_id = f[0];
        c.position.x = parse_double(f[1], "x", line_no);
        c.position.y = parse_double(f[2], "y", line_no);
        c.cls = class_from_code(f[3]);
        c.confidence = parse_double(f[4], "confidence", line_no);
        c.source_tile.i = static_cast<int>(parse_long(f[5], "tile_i", line_no));
        c.source_tile.j = static_cast<int>(parse_long(f[6], "tile_j", line_no));
        cands.push_back(std::move(c));
    }
    return cands;
}

}  // namespace gcp
