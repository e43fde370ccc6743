#include "corpus.hpp"

#include "statstok/dataio.hpp"
#include "statstok/error.hpp"
#include "statstok/eval.hpp"
#include "statstok/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace statstok;

namespace {

TimeSeries constant_series(std::size_t n, double v) {
    TimeSeries s;
    s.id = "c";
    s.values = Matrix(n, 1, v);
    return s;
}

} // namespace

TEST(Pipeline, ConstantSeriesIsOneToken) {
    const auto r = stats_summarize(constant_series(100, 3.0), TokenizerConfig{});
    EXPECT_EQ(r.summary.token_count(), 1u);
    EXPECT_EQ(r.compression_ratio, 100.0);
    EXPECT_EQ(r.input_id, "c");
    // z-normalized constant channel is all zeros
    EXPECT_EQ(r.summary.tokens(0, 0), 0.0);
}

TEST(Pipeline, MeanProvenanceMatchesSegmentation) {
    const auto g = testing_corpus::regime_series(3, 1000);
    const auto r = stats_summarize(g.series, TokenizerConfig{});
    EXPECT_EQ(r.summary.provenance, r.segmentation.segments());
    EXPECT_EQ(r.compression_ratio, 1000.0 / double(r.summary.token_count()));
    EXPECT_EQ(r.scale_stats.size(), 100u);
}

TEST(Pipeline, TokensAreMeansOfNormalizedSegments) {
    const auto g = testing_corpus::regime_series(4, 500);
    const auto r = stats_summarize(g.series, TokenizerConfig{});
    const auto z = znormalize(g.series);
    const auto direct = summarize_mean(z, r.segmentation);
    EXPECT_EQ(direct.tokens, r.summary.tokens);
}

TEST(Pipeline, FourRegimeSeriesFindsEveryChange) {
    // Each true change should be matched by a detected split within s_min.
    for (std::uint64_t seed = 0; seed < 6; seed += 2) {
        const auto g = testing_corpus::regime_series(seed, 1000);
        const auto r = stats_summarize(g.series, TokenizerConfig{});
        const auto prf = change_point_prf(r.segmentation.splits(), g.true_splits, 20);
        EXPECT_EQ(prf.recall, 1.0) << "seed " << seed;
        EXPECT_GE(r.summary.token_count(), 4u);
    }
}

TEST(Pipeline, UniformRecordsChunkBoundaries) {
    const auto g = testing_corpus::regime_series(1, 400);
    SummaryOptions opts;
    opts.method = SummaryMethod::Uniform;
    const auto r = stats_summarize(g.series, TokenizerConfig{}, opts);
    EXPECT_EQ(r.summary.token_count(), 10u);
    EXPECT_EQ(r.segmentation.splits(), (std::vector<std::size_t>{40, 80, 120, 160, 200, 240, 280, 320, 360}));
    EXPECT_TRUE(r.scale_stats.empty());
    EXPECT_EQ(r.compression_ratio, 40.0);
}

TEST(Pipeline, GmmTokensPerSegment) {
    const auto g = testing_corpus::regime_series(0, 600);
    SummaryOptions opts;
    opts.method = SummaryMethod::Gmm;
    opts.seed = 8;
    const auto r = stats_summarize(g.series, TokenizerConfig{}, opts);
    std::size_t expect = 0;
    for (const auto& s : r.segmentation.segments()) expect += s.size() < 10 ? 1 : 5;
    EXPECT_EQ(r.summary.token_count(), expect);
    EXPECT_EQ(r, stats_summarize(g.series, TokenizerConfig{}, opts));
}

TEST(Pipeline, BatchMatchesSingleAndIgnoresThreads) {
    std::vector<TimeSeries> batch;
    for (std::uint64_t s = 0; s < 5; ++s) batch.push_back(testing_corpus::regime_series(s, 450).series);
    SummaryOptions opts;
    opts.method = SummaryMethod::Gmm;
    opts.threads = 1;
    const auto one = stats_summarize_batch(batch, TokenizerConfig{}, opts);
    opts.threads = 3;
    const auto three = stats_summarize_batch(batch, TokenizerConfig{}, opts);
    ASSERT_EQ(one.size(), 5u);
    EXPECT_EQ(one, three);
    opts.threads = 1;
    for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_EQ(one[i], stats_summarize(batch[i], TokenizerConfig{}, opts));
}

TEST(Pipeline, RejectsBadInput) {
    TimeSeries empty;
    EXPECT_THROW(stats_summarize(empty, TokenizerConfig{}), Error);
    TokenizerConfig bad;
    bad.stride = 0;
    EXPECT_THROW(stats_summarize(constant_series(50, 1.0), bad), Error);
}
