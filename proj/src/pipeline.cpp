#include "statstok/pipeline.hpp"

#include "parallel.hpp"
#include "statstok/dataio.hpp"

namespace statstok {

StatsResult stats_summarize(const TimeSeries& series, const TokenizerConfig& cfg,
                            const SummaryOptions& options) {
    validate(cfg);
    const TimeSeries normalized = znormalize(series);

    StatsResult result;
    result.input_id = series.id;
    result.config = cfg;
    switch (options.method) {
    case SummaryMethod::Uniform: {
        const auto bounds = uniform_boundaries(normalized.length(), options.n_chunks);
        result.segmentation = Segmentation(
            normalized.length(), std::vector<std::size_t>(bounds.begin() + 1, bounds.end() - 1));
        result.summary = summarize_uniform(normalized, options.n_chunks);
        break;
    }
    case SummaryMethod::Mean:
    case SummaryMethod::Gmm: {
        Detection detection = detect(normalized, cfg, options.threads);
        result.segmentation = std::move(detection.segmentation);
        result.scale_stats = std::move(detection.scale_stats);
        result.summary = options.method == SummaryMethod::Mean
                             ? summarize_mean(normalized, result.segmentation)
                             : summarize_gmm(normalized, result.segmentation,
                                             options.gmm_components, options.seed);
        break;
    }
    }
    result.compression_ratio = static_cast<double>(normalized.length()) /
                               static_cast<double>(result.summary.token_count());
    return result;
}

std::vector<StatsResult> stats_summarize_batch(const std::vector<TimeSeries>& series,
                                               const TokenizerConfig& cfg,
                                               const SummaryOptions& options) {
    std::vector<StatsResult> out(series.size());
    SummaryOptions inner = options;
    inner.threads = 1;
    detail::parallel_for(series.size(), options.threads,
                         [&](std::size_t i) { out[i] = stats_summarize(series[i], cfg, inner); });
    return out;
}

} // namespace statstok
