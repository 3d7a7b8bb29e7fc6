#pragma once

#include "gcplocate/filter.hpp"
#include "gcplocate/locator.hpp"
#include "gcplocate/ranker.hpp"
#include "gcplocate/synth.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcp {

struct NoMatches : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MatchedPair {
    GcpCandidate cand;
    TruthObs truth;
    double dx = 0.0;  // cand - truth
    double dy = 0.0;
    double error = 0.0;  // Euclidean
};

struct MatchResult {
    std::vector<MatchedPair> pairs;
    std::vector<GcpCandidate> unmatched_candidates;  // false positives
    std::vector<TruthObs> unmatched_truths;          // false negatives
};

// Greedy one-to-one matching by ascending distance under epsilon, optionally
// class-aware. Candidates and truths must belong to one image.
MatchResult match(const std::vector<GcpCandidate>& cands, const std::vector<TruthObs>& truths,
                  double epsilon = 5.0, bool class_aware = true);

// Convenience over a whole survey: groups by image internally.
MatchResult match_survey(const std::vector<GcpCandidate>& cands, const SceneTruth& truth,
                         const MatchRule& rule = {});

// Pixel-error distribution of the matched pairs.
struct ErrorStats {
    std::size_t pairs = 0;
    double max_error = 0.0;
    double mean_error = 0.0;
    std::array<double, 4> within_px{};  // cumulative fraction at 1,2,3,4 px

    double within(int px) const { return within_px.at(static_cast<std::size_t>(px) - 1); }
};

ErrorStats error_stats(const MatchResult& result);  // NoMatches when empty

// One altitude band of the detection performance table.
struct BandRow {
    double alt_lo = 0.0;
    double alt_hi = 0.0;
    int markers = 0;  // true observations in the band
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> mean_px_size;
};

// Buckets per-image results by flight altitude. band_edges must be ascending;
// bands are [e0,e1), [e1,e2), ... Empty bands are omitted.
std::vector<BandRow> band_report(const MatchResult& result, const SceneTruth& truth,
                                 const std::vector<double>& band_edges);

// Top-k quality of the ranked groups against ground truth.
struct RankingRow {
    std::string marker_id;
    int group_size = 0;
    std::vector<int> k;               // evaluated depths
    std::vector<double> precision_k;  // fraction of top-k that truly observe the marker
    std::vector<double> pona_k;
    bool short_group = false;  // fewer members than the largest k
};

std::vector<RankingRow> ranking_report(const std::vector<GcpGroup>& ranked,
                                       const SceneTruth& truth,
                                       const std::vector<int>& k_list = {3, 5, 8, 10},
                                       const MatchRule& rule = {});

// --- report files ------------------------------------------------------------

void write_error_stats_csv(const std::filesystem::path& path, const ErrorStats& stats);
void write_error_scatter_csv(const std::filesystem::path& path, const MatchResult& result);
void write_error_scatter_svg(const std::filesystem::path& path, const MatchResult& result);
void write_band_report_csv(const std::filesystem::path& path, const std::vector<BandRow>& rows);
void write_ranking_report_csv(const std::filesystem::path& path,
                              const std::vector<RankingRow>& rows);

}  // namespace gcp
