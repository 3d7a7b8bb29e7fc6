#pragma once

#include "gcplocate/locator.hpp"
#include "gcplocate/synth.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gcp {

struct BadThreshold : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// How a candidate counts as covering a true observation.
struct MatchRule {
    double epsilon = 5.0;  // px
    bool class_aware = true;
};

// One row of the threshold calibration sweep. Metrics whose denominator is
// zero are reported absent, never as 0.
struct ThresholdReport {
    double threshold = 0.0;
    std::optional<double> precision;
    std::optional<double> loss_ratio;
    int images_retained = 0;
    std::optional<int> true_gcps_lost;
};

// Keeps candidates with confidence >= t, in stable order.
std::vector<GcpCandidate> apply_threshold(const std::vector<GcpCandidate>& cands, double t);

// Image-granularity precision: of the images that retain at least one
// candidate, the fraction that really contain a marker. Absent when no image
// retains anything.
std::optional<double> image_precision(const std::vector<GcpCandidate>& cands,
                                      const SceneTruth& truth);

// Detection-granularity variant (not the default report): fraction of
// retained candidates that cover some true observation.
std::optional<double> detection_precision(const std::vector<GcpCandidate>& cands,
                                          const SceneTruth& truth, const MatchRule& rule = {});

// Fraction of true observations whose candidate existed before thresholding
// but not after. Observations nothing ever covered do not count as lost.
std::optional<double> loss_ratio(const std::vector<GcpCandidate>& before,
                                 const std::vector<GcpCandidate>& after, const SceneTruth& truth,
                                 const MatchRule& rule = {});

// One report per threshold (ascending). Pass truth = nullptr for surveys
// without ground truth; precision/loss columns come back absent.
std::vector<ThresholdReport> sweep(const std::vector<GcpCandidate>& cands,
                                   const SceneTruth* truth, const std::vector<double>& thresholds,
                                   const MatchRule& rule = {});

std::vector<double> threshold_grid(double from, double to, double step);

// threshold,precision,loss_ratio,images_retained,gcps_lost
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<ThresholdReport>& reports);
void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<ThresholdReport>& reports);

}  // namespace gcp
