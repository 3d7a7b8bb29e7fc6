#pragma once

#include "gcplocate/locator.hpp"
#include "gcplocate/synth.hpp"

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcp {

struct BadSigma : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptySelection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Candidate annotated with its radial distortion proxy and weighted score:
//   centrality = 1 - d/d_max,  score = sigma * centrality + confidence.
struct ScoredCandidate {
    GcpCandidate candidate;
    double d = 0.0;
    double d_max = 0.0;
    double centrality = 0.0;
    double score = 0.0;
};

// All observations of one physical ground marker across the survey.
struct GcpGroup {
    std::string marker_id;
    std::vector<ScoredCandidate> members;
};

inline constexpr double kDefaultSigma = 2.0;
inline constexpr int kDefaultTopK = 5;
// A selected observation counts as low-distortion when centrality > 0.5.
inline constexpr double kCentralityCutoff = 0.5;

// d = distance to the frame center, d_max = center-to-corner distance.
std::pair<double, double> distortion_distance(const PixelPoint& p, int image_w, int image_h);

ScoredCandidate score(const GcpCandidate& cand, int image_w, int image_h,
                      double sigma = kDefaultSigma);

// Members sorted by score descending; ties by confidence descending, then
// image_id ascending.
GcpGroup rank_group(GcpGroup group);

// First min(k, size) members after ranking. k must be >= 1.
std::vector<ScoredCandidate> select_top_k(const GcpGroup& group, int k = kDefaultTopK);

// Fraction of the selection lying in the low-distortion central region
// (centrality above the cutoff).
double pona(std::span<const ScoredCandidate> selected);

// --- marker association -----------------------------------------------------

// Known (approximate) position of a marker in an image; candidates near an
// anchor join that marker's group. Ground truth supplies anchors in
// evaluation mode; surveyors supply them as a CSV otherwise.
struct MarkerAnchor {
    std::string marker_id;
    std::string image_id;
    PixelPoint position;
};

std::vector<MarkerAnchor> anchors_from_truth(const SceneTruth& truth);
// CSV: marker_id,image_id,x,y
std::vector<MarkerAnchor> load_association_csv(const std::filesystem::path& path);

// Groups candidates by nearest anchor within `radius` (same image only) and
// scores each member. Candidates matching no anchor are dropped. Groups come
// back sorted by marker_id.
std::vector<GcpGroup> group_candidates(const std::vector<GcpCandidate>& cands,
                                       const std::vector<MarkerAnchor>& anchors, double radius,
                                       int image_w, int image_h, double sigma = kDefaultSigma);

// CSV: marker_id,rank,image_id,x,y,score,confidence,centrality -- one block
// per marker, ranks 1..k.
void save_selection_csv(const std::filesystem::path& path, const std::vector<GcpGroup>& ranked,
                        int k);

}  // namespace gcp
