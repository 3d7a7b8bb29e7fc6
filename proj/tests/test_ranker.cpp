#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gcplocate/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <tuple>

using namespace gcp;

namespace {

GcpCandidate cand_at(double x, double y, double conf, const std::string& image = "IMG") {
    GcpCandidate c;
    c.image_id = image;
    c.position = {x, y};
    c.cls = MarkerClass::Cross;
    c.confidence = conf;
    return c;
}

}  // namespace

TEST_CASE("distortion distance at center, corner and edge midpoints") {
    auto [d0, dmax0] = distortion_distance({2736, 1824}, 5472, 3648);
    CHECK(d0 == 0.0);
    CHECK(dmax0 == doctest::Approx(3288.2628).epsilon(1e-6));

    auto [dc, dmaxc] = distortion_distance({0, 0}, 5472, 3648);
    CHECK(dc == dmaxc);
    CHECK(dc == doctest::Approx(std::sqrt(2736.0 * 2736.0 + 1824.0 * 1824.0)));

    auto [de, dmaxe] = distortion_distance({2736, 0}, 5472, 3648);
    CHECK(de == 1824.0);
    const double centrality = 1.0 - de / dmaxe;
    CHECK(centrality == doctest::Approx(0.4453).epsilon(1e-3));
}

TEST_CASE("weighted score: center, corner and half-centrality cases") {
    const ScoredCandidate center = score(cand_at(2736, 1824, 0.9), 5472, 3648, 2.0);
    CHECK(center.score == doctest::Approx(2.9));
    CHECK(center.centrality == 1.0);

    const ScoredCandidate corner = score(cand_at(0, 0, 0.9), 5472, 3648, 2.0);
    CHECK(corner.score == doctest::Approx(0.9));
    CHECK(corner.centrality == doctest::Approx(0.0));

    // centrality 0.5 sits halfway to the corner along the diagonal
    const ScoredCandidate half = score(cand_at(2736 / 2.0, 1824 / 2.0, 0.7), 5472, 3648, 2.0);
    CHECK(half.centrality == doctest::Approx(0.5));
    CHECK(half.score == doctest::Approx(1.7));

    CHECK_THROWS_AS(score(cand_at(0, 0, 0.5), 5472, 3648, 0.0), BadSigma);
    CHECK_THROWS_AS(score(cand_at(0, 0, 0.5), 5472, 3648, -1.0), BadSigma);
}

TEST_CASE("score is monotone in confidence and in distance") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> ux(0.0, 5471.0), uy(0.0, 3647.0);
    std::uniform_real_distribution<double> uconf(0.0, 0.98);
    for (int trial = 0; trial < 300; ++trial) {
        const double x = ux(rng), y = uy(rng), conf = uconf(rng);
        const ScoredCandidate base = score(cand_at(x, y, conf), 5472, 3648);
        const ScoredCandidate more_conf = score(cand_at(x, y, conf + 0.01), 5472, 3648);
        CHECK(more_conf.score > base.score);

        // step towards the nearest corner increases d
        const double sx = x < 2736 ? -7.0 : 7.0;
        const double sy = y < 1824 ? -7.0 : 7.0;
        const double nx = std::clamp(x + sx, 0.0, 5471.0);
        const double ny = std::clamp(y + sy, 0.0, 3647.0);
        const ScoredCandidate further = score(cand_at(nx, ny, conf), 5472, 3648);
        if (further.d > base.d) CHECK(further.score < base.score);
    }
}

TEST_CASE("scaling frame and position together leaves centrality unchanged") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ux(0.0, 5471.0), uy(0.0, 3647.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = ux(rng), y = uy(rng);
        const ScoredCandidate a = score(cand_at(x, y, 0.5), 5472, 3648);
        const ScoredCandidate b = score(cand_at(2 * x, 2 * y, 0.5), 2 * 5472, 2 * 3648);
        CHECK(a.centrality == doctest::Approx(b.centrality).epsilon(1e-12));
    }
}

TEST_CASE("ranking orders by score, then confidence, then image id") {
    GcpGroup g;
    g.marker_id = "GCP1";
    g.members.push_back(score(cand_at(2736, 1824, 0.9, "I3"), 5472, 3648));  // 2.9
    g.members.push_back(score(cand_at(2736 / 2.0, 1824 / 2.0, 0.7, "I1"), 5472, 3648));  // 1.7
    g.members.push_back(score(cand_at(0, 0, 0.9, "I2"), 5472, 3648));  // 0.9

    const GcpGroup ranked = rank_group(g);
    CHECK(ranked.members[0].candidate.image_id == "I3");
    CHECK(ranked.members[1].candidate.image_id == "I1");
    CHECK(ranked.members[2].candidate.image_id == "I2");

    // permutation invariance
    GcpGroup reversed = g;
    std::reverse(reversed.members.begin(), reversed.members.end());
    const GcpGroup r2 = rank_group(reversed);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(r2.members[k].candidate.image_id == ranked.members[k].candidate.image_id);
    }
}

TEST_CASE("equal scores break ties by confidence") {
    GcpGroup g;
    g.marker_id = "GCP1";
    // same centrality, different confidence mixes landing on the same score
    ScoredCandidate a = score(cand_at(2736, 1824, 0.8, "A"), 5472, 3648);
    ScoredCandidate b = score(cand_at(2736, 1824, 0.9, "B"), 5472, 3648);
    a.score = 1.7;
    b.score = 1.7;
    g.members = {a, b};
    const GcpGroup ranked = rank_group(g);
    CHECK(ranked.members[0].candidate.confidence == 0.9);
}

TEST_CASE("rank_group matches a brute-force resort on random groups") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ux(0.0, 5471.0), uy(0.0, 3647.0);
    std::uniform_real_distribution<double> uconf(0.0, 0.98);
    std::uniform_int_distribution<int> usize(1, 40);
    for (int trial = 0; trial < 1000; ++trial) {
        GcpGroup g;
        g.marker_id = "G";
        const int n = usize(rng);
        for (int k = 0; k < n; ++k) {
            g.members.push_back(
                score(cand_at(ux(rng), uy(rng), uconf(rng), "I" + std::to_string(k)), 5472, 3648));
        }
        const GcpGroup ranked = rank_group(g);

        // independent tuple sort: descending score and confidence via negation
        std::vector<std::tuple<double, double, std::string>> keys;
        for (const ScoredCandidate& s : g.members) {
            keys.emplace_back(-s.score, -s.candidate.confidence, s.candidate.image_id);
        }
        std::sort(keys.begin(), keys.end());
        REQUIRE(ranked.members.size() == keys.size());
        for (std::size_t k = 0; k < keys.size(); ++k) {
            CHECK(ranked.members[k].score == -std::get<0>(keys[k]));
            CHECK(ranked.members[k].candidate.confidence == -std::get<1>(keys[k]));
            CHECK(ranked.members[k].candidate.image_id == std::get<2>(keys[k]));
        }
    }
}

TEST_CASE("vanishing sigma converges to pure confidence order") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ux(0.0, 5471.0), uy(0.0, 3647.0);
    std::uniform_real_distribution<double> uconf(0.0, 0.98);
    GcpGroup g;
    g.marker_id = "G";
    for (int k = 0; k < 25; ++k) {
        g.members.push_back(
            score(cand_at(ux(rng), uy(rng), uconf(rng), "I" + std::to_string(k)), 5472, 3648,
                  1e-9));
    }
    const GcpGroup ranked = rank_group(g);
    for (std::size_t k = 1; k < ranked.members.size(); ++k) {
        CHECK(ranked.members[k - 1].candidate.confidence >=
              ranked.members[k].candidate.confidence);
    }
}

TEST_CASE("top-k selection is a prefix of the ranking") {
    GcpGroup g;
    g.marker_id = "GCP1";
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> ux(0.0, 5471.0), uy(0.0, 3647.0);
    std::uniform_real_distribution<double> uconf(0.0, 0.98);
    for (int k = 0; k < 33; ++k) {
        g.members.push_back(
            score(cand_at(ux(rng), uy(rng), uconf(rng), "I" + std::to_string(k)), 5472, 3648));
    }
    const GcpGroup ranked = rank_group(g);
    const auto top5 = select_top_k(g, 5);
    REQUIRE(top5.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(top5[k].candidate.image_id == ranked.members[k].candidate.image_id);
    }

    GcpGroup small;
    small.marker_id = "GCP2";
    small.members = {g.members[0], g.members[1], g.members[2]};
    CHECK(select_top_k(small, 5).size() == 3);

    const auto top1 = select_top_k(g, 1);
    REQUIRE(top1.size() == 1);
    CHECK(top1[0].candidate.image_id == ranked.members[0].candidate.image_id);

    CHECK_THROWS_AS(select_top_k(g, 0), std::invalid_argument);
}

TEST_CASE("pona counts the low-distortion fraction") {
    std::vector<ScoredCandidate> sel;
    for (int k = 0; k < 7; ++k) sel.push_back(score(cand_at(2736, 1824, 0.9), 5472, 3648));
    for (int k = 0; k < 3; ++k) sel.push_back(score(cand_at(10, 10, 0.9), 5472, 3648));
    CHECK(pona(sel) == doctest::Approx(0.7));

    const std::vector<ScoredCandidate> all_central(5, score(cand_at(2736, 1824, 0.9), 5472, 3648));
    CHECK(pona(all_central) == 1.0);

    const std::vector<ScoredCandidate> corner_only = {score(cand_at(0, 0, 0.9), 5472, 3648)};
    CHECK(pona(corner_only) == 0.0);

    CHECK_THROWS_AS(pona(std::span<const ScoredCandidate>{}), EmptySelection);
}

TEST_CASE("association csv loads anchors and selection csv writes ranked blocks") {
    namespace fs = std::filesystem;
    const fs::path assoc = fs::temp_directory_path() / "gcpl_assoc.csv";
    {
        std::ofstream out(assoc);
        out << "marker_id,image_id,x,y\n";
        out << "GCP1,I1,100.5,200.25\n";
        out << "# comment\n";
        out << "GCP2,I1,400,100\n";
    }
    const auto anchors = load_association_csv(assoc);
    REQUIRE(anchors.size() == 2);
    CHECK(anchors[0].marker_id == "GCP1");
    CHECK(anchors[0].position == PixelPoint{100.5, 200.25});
    fs::remove(assoc);

    GcpGroup g;
    g.marker_id = "GCP1";
    for (int k = 0; k < 4; ++k) {
        g.members.push_back(
            score(cand_at(2736, 1824, 0.9 - 0.1 * k, "I" + std::to_string(k)), 5472, 3648));
    }
    const fs::path sel = fs::temp_directory_path() / "gcpl_selection.csv";
    save_selection_csv(sel, {rank_group(g)}, 3);
    std::ifstream in(sel);
    std::string line;
    std::getline(in, line);
    CHECK(line == "marker_id,rank,image_id,x,y,score,confidence,centrality");
    int rank = 0;
    while (std::getline(in, line)) {
        ++rank;
        CHECK(line.rfind("GCP1," + std::to_string(rank) + ",I", 0) == 0);
    }
    CHECK(rank == 3);  // capped at k even though the group has 4 members
    fs::remove(sel);
}

TEST_CASE("grouping assigns candidates to the nearest anchor in the same image") {
    std::vector<MarkerAnchor> anchors = {
        {"GCP1", "I1", {100, 100}},
        {"GCP2", "I1", {400, 100}},
        {"GCP1", "I2", {150, 150}},
    };
    std::vector<GcpCandidate> cands = {
        cand_at(102, 101, 0.9, "I1"),   // GCP1 in I1
        cand_at(398, 99, 0.8, "I1"),    // GCP2 in I1
        cand_at(151, 150, 0.7, "I2"),   // GCP1 in I2
        cand_at(2000, 2000, 0.9, "I1"), // matches nothing
    };
    const auto groups = group_candidates(cands, anchors, 50.0, 5472, 3648);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].marker_id == "GCP1");
    CHECK(groups[0].members.size() == 2);
    CHECK(groups[1].marker_id == "GCP2");
    CHECK(groups[1].members.size() == 1);
}
