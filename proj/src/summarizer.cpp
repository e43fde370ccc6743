#include "statstok/summarizer.hpp"

#include "statstok/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace statstok {

std::string_view to_string(SummaryMethod method) noexcept {
    switch (method) {
    case SummaryMethod::Mean: return "mean";
    case SummaryMethod::Gmm: return "gmm";
    case SummaryMethod::Uniform: return "uniform";
    }
    return "mean";
}

SummaryMethod parse_summary_method(std::string_view name) {
    if (name == "mean") return SummaryMethod::Mean;
    if (name == "gmm") return SummaryMethod::Gmm;
    if (name == "uniform") return SummaryMethod::Uniform;
    throw Error(ErrorCode::InvalidInput, "unknown summary method '" + std::string(name) + "'");
}

namespace {

void check_segmentation(const TimeSeries& series, const Segmentation& seg) {
    validate(series);
    if (seg.length() != series.length()) {
        throw Error(ErrorCode::InvalidInput,
                    "segmentation length " + std::to_string(seg.length()) +
                        " does not match series length " + std::to_string(series.length()));
    }
}

std::vector<double> segment_mean(MatrixView rows) {
    std::vector<double> mean(rows.cols(), 0.0);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        const auto row = rows.row(r);
        for (std::size_t c = 0; c < rows.cols(); ++c) mean[c] += row[c];
    }
    for (double& m : mean) m /= static_cast<double>(rows.rows());
    return mean;
}

std::vector<double> segment_variance(MatrixView rows, const std::vector<double>& mean) {
    std::vector<double> var(rows.cols(), 0.0);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        const auto row = rows.row(r);
        for (std::size_t c = 0; c < rows.cols(); ++c) var[c] += (row[c] - mean[c]) * (row[c] - mean[c]);
    }
    for (double& v : var) v /= static_cast<double>(rows.rows());
    return var;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// splitmix64 finalizer; derives independent per-segment seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix kmeans_plus_plus(MatrixView points, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = points.rows();
    Matrix centers(0, points.cols());
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    centers.append_row(points.row(pick(rng)));

    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (centers.rows() < k) {
        const auto last = centers.row(centers.rows() - 1);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(points.row(i), last));
            total += nearest[i];
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += nearest[i];
                if (acc > target && nearest[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        centers.append_row(points.row(chosen));
    }
    return centers;
}

struct GmmParams {
    std::vector<double> weights;
    Matrix means;
    Matrix variances;
};

// Fills resp (n x K) and returns the average log-likelihood per point.
double expectation(MatrixView points, const GmmParams& p, Matrix& resp) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const std::size_t k = p.weights.size();
    std::vector<double> norm(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += std::log(2.0 * std::numbers::pi * p.variances(j, c));
        norm[j] = -0.5 * s;
    }
    double total = 0.0;
    std::vector<double> log_terms(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = points.row(i);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            if (p.weights[j] <= 0.0) {
                log_terms[j] = -std::numeric_limits<double>::infinity();
                continue;
            }
            double q = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = x[c] - p.means(j, c);
                q += diff * diff / p.variances(j, c);
            }
            log_terms[j] = std::log(p.weights[j]) + norm[j] - 0.5 * q;
            best = std::max(best, log_terms[j]);
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += std::exp(log_terms[j] - best);
        const double log_px = best + std::log(sum);
        total += log_px;
        for (std::size_t j = 0; j < k; ++j) resp(i, j) = std::exp(log_terms[j] - log_px);
    }
    return total / static_cast<double>(n);
}

GmmParams maximization(MatrixView points, const Matrix& resp, const GmmParams& prev,
                       double variance_floor) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const std::size_t k = prev.weights.size();
    GmmParams next = prev;
    for (std::size_t j = 0; j < k; ++j) {
        double nk = 0.0;
        for (std::size_t i = 0; i < n; ++i) nk += resp(i, j);
        next.weights[j] = nk / static_cast<double>(n);
        if (!(nk > 0.0)) continue; // empty component keeps its old shape
        for (std::size_t c = 0; c < d; ++c) {
            double m = 0.0;
            for (std::size_t i = 0; i < n; ++i) m += resp(i, j) * points(i, c);
            m /= nk;
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double diff = points(i, c) - m;
                v += resp(i, j) * diff * diff;
            }
            next.means(j, c) = m;
            next.variances(j, c) = std::max(v / nk, variance_floor);
        }
    }
    return next;
}

} // namespace

SummarizedSeries summarize_mean(const TimeSeries& series, const Segmentation& seg) {
    check_segmentation(series, seg);
    SummarizedSeries out;
    out.method = SummaryMethod::Mean;
    out.tokens = Matrix(0, series.dims());
    for (const Segment& s : seg.segments()) {
        out.tokens.append_row(segment_mean(series.values.slice_rows(s.begin, s.end)));
        out.provenance.push_back(s);
    }
    return out;
}

GmmModel fit_gmm(MatrixView points, std::size_t components, std::uint64_t seed,
                 const GmmOptions& options) {
    if (components < 1) throw Error(ErrorCode::InvalidInput, "fit_gmm: need at least one component");
    if (points.cols() < 1) throw Error(ErrorCode::InvalidInput, "fit_gmm: zero-dimensional points");
    if (points.rows() < 2 * components) {
        throw Error(ErrorCode::TooFewPoints, "fit_gmm: " + std::to_string(points.rows()) +
                                                 " points for " + std::to_string(components) +
                                                 " components (need >= 2K)");
    }
    for (double v : points.values()) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "fit_gmm: non-finite value");
    }
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();

    std::mt19937_64 rng(seed);
    GmmParams params;
    params.means = kmeans_plus_plus(points, components, rng);
    params.weights.assign(components, 1.0 / static_cast<double>(components));
    const auto global_mean = segment_mean(points);
    const auto global_var = segment_variance(points, global_mean);
    params.variances = Matrix(components, d);
    for (std::size_t j = 0; j < components; ++j) {
        for (std::size_t c = 0; c < d; ++c) {
            params.variances(j, c) = std::max(global_var[c], options.variance_floor);
        }
    }

    GmmModel model;
    model.components = components;
    Matrix resp(n, components);
    double ll = expectation(points, params, resp);
    model.log_likelihood.push_back(ll);

    Matrix next_resp(n, components);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        GmmParams next = maximization(points, resp, params, options.variance_floor);
        const double next_ll = expectation(points, next, next_resp);
        // EM cannot lower the likelihood; a drop here is rounding at convergence.
        if (!(next_ll >= ll)) break;
        params = std::move(next);
        std::swap(resp, next_resp);
        model.log_likelihood.push_back(next_ll);
        const double gain = next_ll - ll;
        ll = next_ll;
        if (gain < options.tolerance) break;
    }

    model.weights = std::move(params.weights);
    model.means = std::move(params.means);
    model.variances = std::move(params.variances);
    return model;
}

SummarizedSeries summarize_gmm(const TimeSeries& series, const Segmentation& seg,
                               std::size_t components, std::uint64_t seed) {
    check_segmentation(series, seg);
    if (components < 1) throw Error(ErrorCode::InvalidInput, "summarize_gmm: K must be >= 1");
    const std::size_t d = series.dims();
    SummarizedSeries out;
    out.method = SummaryMethod::Gmm;
    out.tokens = Matrix(0, d);
    Matrix variances(0, d);

    const auto segments = seg.segments();
    for (std::size_t si = 0; si < segments.size(); ++si) {
        const Segment& s = segments[si];
        const MatrixView rows = series.values.slice_rows(s.begin, s.end);
        if (s.size() < 2 * components) {
            const auto mean = segment_mean(rows);
            out.tokens.append_row(mean);
            variances.append_row(segment_variance(rows, mean));
            out.provenance.push_back(s);
            continue;
        }
        const GmmModel model = fit_gmm(rows, components, mix_seed(seed, si));
        std::vector<std::size_t> order(components);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (model.weights[a] != model.weights[b]) return model.weights[a] > model.weights[b];
            return model.means(a, 0) < model.means(b, 0);
        });
        for (std::size_t j : order) {
            out.tokens.append_row(model.means.row(j));
            variances.append_row(model.variances.row(j));
            out.provenance.push_back(s);
        }
    }
    out.token_variances = std::move(variances);
    return out;
}

std::vector<std::size_t> uniform_boundaries(std::size_t length, std::size_t n_chunks) {
    if (n_chunks < 1) throw Error(ErrorCode::InvalidInput, "uniform chunk count must be >= 1");
    std::vector<std::size_t> bounds;
    bounds.reserve(n_chunks + 1);
    for (std::size_t i = 0; i <= n_chunks; ++i) {
        // round(i*T/n) with halves rounded up, in exact integer arithmetic.
        const std::size_t b = (2 * i * length + n_chunks) / (2 * n_chunks);
        if (bounds.empty() || b != bounds.back()) bounds.push_back(b);
    }
    return bounds;
}

SummarizedSeries summarize_uniform(const TimeSeries& series, std::size_t n_chunks) {
    validate(series);
    const auto bounds = uniform_boundaries(series.length(), n_chunks);
    SummarizedSeries out;
    out.method = SummaryMethod::Uniform;
    out.tokens = Matrix(0, series.dims());
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        out.tokens.append_row(segment_mean(series.values.slice_rows(bounds[i], bounds[i + 1])));
        out.provenance.push_back({bounds[i], bounds[i + 1]});
    }
    return out;
}

} // namespace statstok
