#pragma once

#include "statstok/matrix.hpp"
#include "statstok/pipeline.hpp"
#include "statstok/time_series.hpp"
#include "statstok/tokenizer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace statstok {

struct PrfScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tolerance = 0;
};

struct CompressionStats {
    double mean_original_length = 0.0;
    double mean_token_count = 0.0;
    double ratio = 0.0; ///< mean_original_length / mean_token_count
};

struct MethodAccuracy {
    SummaryMethod method = SummaryMethod::Mean;
    double accuracy = 0.0;
};

struct NoiseCell {
    double sigma = 0.0;
    std::vector<MethodAccuracy> accuracies;
};

struct EvalMetadata {
    std::uint64_t seed = 0;
    TokenizerConfig config;
    std::size_t gmm_components = 5;
    std::size_t n_chunks = 10;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
};

struct EvalReport {
    std::optional<PrfScore> change_point;
    std::optional<CompressionStats> compression;
    std::optional<std::vector<MethodAccuracy>> classification;
    std::optional<std::vector<NoiseCell>> noise;
    std::optional<EvalMetadata> metadata;
};

/// Matches predictions to truths one-to-one within +-tol, scanning both in
/// ascending order and pairing each prediction with the earliest unmatched
/// truth in range. That greedy yields a maximum matching, so swapping the two
/// lists swaps precision and recall. Both lists must be sorted ascending.
PrfScore change_point_prf(const std::vector<std::size_t>& predicted,
                          const std::vector<std::size_t>& truth, std::size_t tol);

/// Dynamic time warping with squared Euclidean local cost and unit steps.
double dtw_distance(MatrixView a, MatrixView b);

struct LabeledTokens {
    Matrix tokens;
    std::string label;
};

/// 1-nearest-neighbour under dtw_distance; ties go to the earliest training
/// item. Returns the fraction of test items whose label is predicted.
double knn1_accuracy(const std::vector<LabeledTokens>& train, const std::vector<LabeledTokens>& test,
                     unsigned threads = 1);

CompressionStats compression_stats(const std::vector<StatsResult>& results);

/// Summarizes both datasets with each method and scores the 1-NN proxy.
EvalReport run_knn_experiment(const Dataset& train, const Dataset& test,
                              const std::vector<SummaryMethod>& methods, const TokenizerConfig& cfg,
                              const SummaryOptions& options);

/// For each sigma and method: corrupt the z-normalized test series with
/// N(0, sigma^2) (train stays clean), summarize, and score the 1-NN proxy.
/// Noise for test item i at sigma index s is seeded from (seed, s, i), so all
/// methods see the same corruption.
EvalReport run_noise_experiment(const Dataset& train, const Dataset& test,
                                const std::vector<double>& sigmas,
                                const std::vector<SummaryMethod>& methods,
                                const TokenizerConfig& cfg, const SummaryOptions& options);

std::string eval_report_to_json(const EvalReport& report);

} // namespace statstok
