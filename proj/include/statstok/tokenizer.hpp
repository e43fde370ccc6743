#pragma once

#include "statstok/time_series.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace statstok {

struct TokenizerConfig {
    std::size_t delta_min = 5;
    std::size_t delta_max = 500;
    std::size_t delta_step = 5;
    std::size_t stride = 10;
    double alpha = 2.0;
    std::size_t s_min = 20;
    double epsilon = 1e-6;
    double lambda = 1.0;

    friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

/// Throws InvalidInput when a field is out of range.
void validate(const TokenizerConfig& cfg);

/// Boundary at `position` between [position - scale, position) and
/// [position, position + scale).
struct ChangeCandidate {
    std::size_t position = 0;
    double score = 0.0;
    std::size_t scale = 0;

    friend bool operator==(const ChangeCandidate&, const ChangeCandidate&) = default;
};

struct ScaleStats {
    std::size_t scale = 0;
    double mu = 0.0;
    double sigma = 0.0;

    friend bool operator==(const ScaleStats&, const ScaleStats&) = default;
};

struct Segment {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Interior split points of [0, length). Segments are the half-open runs
/// between consecutive splits, with 0 and length as implicit outer bounds.
class Segmentation {
public:
    Segmentation() = default;
    /// Throws InvalidInput unless splits are strictly increasing in (0, length).
    Segmentation(std::size_t length, std::vector<std::size_t> splits);

    std::size_t length() const noexcept { return length_; }
    const std::vector<std::size_t>& splits() const noexcept { return splits_; }
    std::size_t segment_count() const noexcept { return splits_.size() + 1; }
    std::vector<Segment> segments() const;

    friend bool operator==(const Segmentation&, const Segmentation&) = default;

private:
    std::size_t length_ = 0;
    std::vector<std::size_t> splits_;
};

/// Scores every grid position t in {delta, delta + stride, ...} with
/// t + delta <= T, in ascending order. Throws EmptyScale when 2*delta > T.
std::vector<ChangeCandidate> score_scale(const TimeSeries& series, std::size_t delta,
                                         const TokenizerConfig& cfg);

/// Keeps candidates with score >= mu + alpha * sigma (population sigma).
/// A degenerate score field (sigma < 1e-12) keeps nothing.
std::pair<ScaleStats, std::vector<ChangeCandidate>>
threshold_candidates(const std::vector<ChangeCandidate>& scored, double alpha);

/// Greedy suppression: highest score first (ties to the lower position); a
/// candidate is accepted when every accepted position is at least s_min away.
/// Returns accepted positions in ascending order.
std::vector<std::size_t> non_max_suppression(std::vector<ChangeCandidate> candidates,
                                             std::size_t s_min);

/// Scales actually evaluated for a series of the given length.
std::vector<std::size_t> applicable_scales(std::size_t length, const TokenizerConfig& cfg);

/// Everything produced while detecting splits.
struct Detection {
    Segmentation segmentation;
    std::vector<ScaleStats> scale_stats;
    std::vector<ChangeCandidate> scores;     ///< all scored positions, scale-major
    std::vector<ChangeCandidate> candidates; ///< pooled survivors, one per position
};

Detection detect(const TimeSeries& series, const TokenizerConfig& cfg, unsigned threads = 1);

Segmentation detect_splits(const TimeSeries& series, const TokenizerConfig& cfg,
                           unsigned threads = 1);

/// Sum over segments of -(|S|/2) log|Sigma_S| + (k/2) log|S|, evaluated as
/// written. Length-1 segments use Sigma = epsilon * I.
double segmentation_cost(const TimeSeries& series, const Segmentation& seg,
                         const TokenizerConfig& cfg);

} // namespace statstok
