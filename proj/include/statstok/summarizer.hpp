#pragma once

#include "statstok/matrix.hpp"
#include "statstok/time_series.hpp"
#include "statstok/tokenizer.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace statstok {

enum class SummaryMethod { Mean, Gmm, Uniform };

std::string_view to_string(SummaryMethod method) noexcept;
/// Throws InvalidInput for anything other than "mean", "gmm" or "uniform".
SummaryMethod parse_summary_method(std::string_view name);

struct SummarizedSeries {
    Matrix tokens;                   ///< one row per token, d columns
    std::vector<Segment> provenance; ///< source range of each token
    SummaryMethod method = SummaryMethod::Mean;
    /// GMM only: per-token component variances (diagonal), same shape as tokens.
    std::optional<Matrix> token_variances;

    std::size_t token_count() const noexcept { return tokens.rows(); }

    friend bool operator==(const SummarizedSeries&, const SummarizedSeries&) = default;
};

/// Diagonal-covariance Gaussian mixture.
struct GmmModel {
    std::size_t components = 0;
    std::vector<double> weights;
    Matrix means;     ///< K x d
    Matrix variances; ///< K x d
    /// Per-point average log-likelihood after each E-step, starting with the
    /// initial parameters. Non-decreasing.
    std::vector<double> log_likelihood;

    friend bool operator==(const GmmModel&, const GmmModel&) = default;
};

struct GmmOptions {
    std::size_t max_iterations = 200;
    double tolerance = 1e-6;      ///< stop when per-point log-likelihood gains less
    double variance_floor = 1e-6;
};

/// Mean of every segment, in segment order.
SummarizedSeries summarize_mean(const TimeSeries& series, const Segmentation& seg);

/// EM for a K-component diagonal GMM, seeded with k-means++.
/// Throws TooFewPoints when points.rows() < 2K.
GmmModel fit_gmm(MatrixView points, std::size_t components, std::uint64_t seed,
                 const GmmOptions& options = {});

/// K tokens per segment (component means, heaviest first); segments shorter
/// than 2K fall back to a single mean token.
SummarizedSeries summarize_gmm(const TimeSeries& series, const Segmentation& seg,
                               std::size_t components = 5, std::uint64_t seed = 0);

/// Chunk boundaries round(i*T/n_chunks), i = 0..n_chunks, empty chunks dropped.
std::vector<std::size_t> uniform_boundaries(std::size_t length, std::size_t n_chunks);

/// Piecewise aggregate approximation: mean of each equal-width chunk.
SummarizedSeries summarize_uniform(const TimeSeries& series, std::size_t n_chunks = 10);

} // namespace statstok
