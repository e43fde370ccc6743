#pragma once

#include "statstok/summarizer.hpp"
#include "statstok/time_series.hpp"
#include "statstok/tokenizer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace statstok {

struct SummaryOptions {
    SummaryMethod method = SummaryMethod::Mean;
    std::size_t gmm_components = 5;
    std::size_t n_chunks = 10;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Output of the full normalize -> detect -> summarize pipeline.
struct StatsResult {
    std::string input_id;
    TokenizerConfig config;
    Segmentation segmentation;
    SummarizedSeries summary;
    std::vector<ScaleStats> scale_stats;
    double compression_ratio = 0.0; ///< T / token count

    friend bool operator==(const StatsResult&, const StatsResult&) = default;
};

/// Z-normalizes each channel, detects splits (uniform skips detection and
/// records its chunk boundaries as the segmentation), then summarizes.
StatsResult stats_summarize(const TimeSeries& series, const TokenizerConfig& cfg,
                            const SummaryOptions& options = {});

/// Runs stats_summarize over many series; output order matches input order
/// for any thread count.
std::vector<StatsResult> stats_summarize_batch(const std::vector<TimeSeries>& series,
                                               const TokenizerConfig& cfg,
                                               const SummaryOptions& options);

} // namespace statstok
