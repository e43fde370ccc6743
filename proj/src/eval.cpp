#include "statstok/eval.hpp"

#include "json_util.hpp"
#include "parallel.hpp"
#include "statstok/dataio.hpp"
#include "statstok/error.hpp"
#include "statstok/synth.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace statstok {

using detail::Json;

PrfScore change_point_prf(const std::vector<std::size_t>& predicted,
                          const std::vector<std::size_t>& truth, std::size_t tol) {
    if (!std::is_sorted(predicted.begin(), predicted.end())) {
        throw Error(ErrorCode::InvalidInput, "change_point_prf: predicted splits are not sorted");
    }
    if (!std::is_sorted(truth.begin(), truth.end())) {
        throw Error(ErrorCode::InvalidInput, "change_point_prf: true splits are not sorted");
    }
    PrfScore out;
    out.tolerance = tol;
    if (predicted.empty() && truth.empty()) {
        out.precision = out.recall = out.f1 = 1.0;
        return out;
    }

    std::size_t matches = 0;
    std::size_t next = 0; // truths before this index are matched or out of reach
    for (std::size_t p : predicted) {
        while (next < truth.size() && truth[next] + tol < p) ++next;
        if (next < truth.size() && truth[next] <= p + tol) {
            ++matches;
            ++next;
        }
    }
    const double m = static_cast<double>(matches);
    out.precision = predicted.empty() ? 0.0 : m / static_cast<double>(predicted.size());
    out.recall = truth.empty() ? 0.0 : m / static_cast<double>(truth.size());
    const double sum = out.precision + out.recall;
    out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
    return out;
}

double dtw_distance(MatrixView a, MatrixView b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidInput, "dtw_distance: empty sequence");
    if (a.cols() != b.cols()) throw Error(ErrorCode::InvalidInput, "dtw_distance: dimension mismatch");
    const std::size_t n = a.rows();
    const std::size_t m = b.rows();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf);
    std::vector<double> cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = inf;
        const auto ai = a.row(i - 1);
        for (std::size_t j = 1; j <= m; ++j) {
            const auto bj = b.row(j - 1);
            double cost = 0.0;
            for (std::size_t c = 0; c < ai.size(); ++c) cost += (ai[c] - bj[c]) * (ai[c] - bj[c]);
            cur[j] = cost + std::min({prev[j - 1], prev[j], cur[j - 1]});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double knn1_accuracy(const std::vector<LabeledTokens>& train, const std::vector<LabeledTokens>& test,
                     unsigned threads) {
    if (train.empty()) throw Error(ErrorCode::InvalidInput, "knn1_accuracy: empty training set");
    if (test.empty()) throw Error(ErrorCode::InvalidInput, "knn1_accuracy: empty test set");
    std::vector<char> correct(test.size(), 0);
    detail::parallel_for(test.size(), threads, [&](std::size_t i) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < train.size(); ++j) {
            const double dist = dtw_distance(test[i].tokens, train[j].tokens);
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        correct[i] = train[best].label == test[i].label ? 1 : 0;
    });
    const auto hits = std::count(correct.begin(), correct.end(), 1);
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

CompressionStats compression_stats(const std::vector<StatsResult>& results) {
    if (results.empty()) throw Error(ErrorCode::InvalidInput, "compression_stats: no results");
    double length = 0.0;
    double tokens = 0.0;
    for (const auto& r : results) {
        length += static_cast<double>(r.segmentation.length());
        tokens += static_cast<double>(r.summary.token_count());
    }
    const double n = static_cast<double>(results.size());
    return {length / n, tokens / n, length / tokens};
}

namespace {

void require_labels(const Dataset& ds, const char* role) {
    if (ds.series.empty()) throw Error(ErrorCode::EmptyDataset, std::string(role) + " dataset is empty");
    for (const auto& s : ds.series) {
        if (!s.label) {
            throw Error(ErrorCode::InvalidInput, std::string(role) + " series '" + s.id + "' has no label");
        }
    }
}

std::vector<LabeledTokens> to_labeled(const std::vector<StatsResult>& results, const Dataset& ds) {
    std::vector<LabeledTokens> out;
    out.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.push_back({results[i].summary.tokens, *ds.series[i].label});
    }
    return out;
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (a + 1)) ^ (0xc2b2ae3d27d4eb4fULL * (b + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EvalMetadata make_metadata(const Dataset& train, const Dataset& test, const TokenizerConfig& cfg,
                           const SummaryOptions& options) {
    return {options.seed, cfg, options.gmm_components, options.n_chunks, train.series.size(),
            test.series.size()};
}

std::string sigma_key(double sigma) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, sigma);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

} // namespace

EvalReport run_knn_experiment(const Dataset& train, const Dataset& test,
                              const std::vector<SummaryMethod>& methods, const TokenizerConfig& cfg,
                              const SummaryOptions& options) {
    require_labels(train, "train");
    require_labels(test, "test");
    if (methods.empty()) throw Error(ErrorCode::InvalidInput, "no summary methods requested");

    EvalReport report;
    report.classification.emplace();
    std::vector<StatsResult> all;
    for (SummaryMethod method : methods) {
        SummaryOptions opts = options;
        opts.method = method;
        const auto train_results = stats_summarize_batch(train.series, cfg, opts);
        const auto test_results = stats_summarize_batch(test.series, cfg, opts);
        const double acc = knn1_accuracy(to_labeled(train_results, train),
                                         to_labeled(test_results, test), options.threads);
        report.classification->push_back({method, acc});
        if (method == methods.front()) {
            all.insert(all.end(), train_results.begin(), train_results.end());
            all.insert(all.end(), test_results.begin(), test_results.end());
        }
    }
    report.compression = compression_stats(all);
    report.metadata = make_metadata(train, test, cfg, options);
    return report;
}

EvalReport run_noise_experiment(const Dataset& train, const Dataset& test,
                                const std::vector<double>& sigmas,
                                const std::vector<SummaryMethod>& methods,
                                const TokenizerConfig& cfg, const SummaryOptions& options) {
    require_labels(train, "train");
    require_labels(test, "test");
    if (methods.empty()) throw Error(ErrorCode::InvalidInput, "no summary methods requested");
    if (sigmas.empty()) throw Error(ErrorCode::InvalidInput, "no noise levels requested");

    std::vector<std::vector<LabeledTokens>> train_tokens;
    for (SummaryMethod method : methods) {
        SummaryOptions opts = options;
        opts.method = method;
        train_tokens.push_back(to_labeled(stats_summarize_batch(train.series, cfg, opts), train));
    }

    EvalReport report;
    report.noise.emplace();
    for (std::size_t si = 0; si < sigmas.size(); ++si) {
        const double sigma = sigmas[si];
        Dataset corrupted = test;
        for (std::size_t i = 0; i < corrupted.series.size(); ++i) {
            // sigma = 0 leaves the raw series untouched so the cell equals the
            // clean run bit-for-bit.
            if (sigma == 0.0) continue;
            TimeSeries& s = corrupted.series[i];
            s = add_gaussian_noise(znormalize(s), sigma, cell_seed(options.seed, si, i));
        }
        NoiseCell cell;
        cell.sigma = sigma;
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            SummaryOptions opts = options;
            opts.method = methods[mi];
            const auto test_results = stats_summarize_batch(corrupted.series, cfg, opts);
            cell.accuracies.push_back(
                {methods[mi], knn1_accuracy(train_tokens[mi], to_labeled(test_results, corrupted),
                                            options.threads)});
        }
        report.noise->push_back(std::move(cell));
    }
    report.metadata = make_metadata(train, test, cfg, options);
    return report;
}

std::string eval_report_to_json(const EvalReport& report) {
    Json j = Json::object();
    if (report.change_point) {
        const auto& cp = *report.change_point;
        j["change_point"] = {{"precision", cp.precision}, {"recall", cp.recall}, {"f1", cp.f1},
                             {"tol", cp.tolerance}};
    }
    if (report.compression) {
        const auto& c = *report.compression;
        j["compression"] = {{"mean_original_length", c.mean_original_length},
                            {"mean_token_count", c.mean_token_count},
                            {"ratio", c.ratio}};
    }
    if (report.classification) {
        Json cls = Json::object();
        for (const auto& m : *report.classification) cls[std::string(to_string(m.method))] = m.accuracy;
        j["classification"] = std::move(cls);
    }
    if (report.noise) {
        Json noise = Json::object();
        for (const auto& cell : *report.noise) {
            Json row = Json::object();
            for (const auto& m : cell.accuracies) row[std::string(to_string(m.method))] = m.accuracy;
            noise[sigma_key(cell.sigma)] = std::move(row);
        }
        j["noise"] = std::move(noise);
    }
    if (report.metadata) {
        const auto& md = *report.metadata;
        const auto& c = md.config;
        j["metadata"] = {{"seed", md.seed},
                         {"config",
                          {{"delta_min", c.delta_min},
                           {"delta_max", c.delta_max},
                           {"delta_step", c.delta_step},
                           {"stride", c.stride},
                           {"alpha", c.alpha},
                           {"s_min", c.s_min},
                           {"epsilon", c.epsilon},
                           {"lambda", c.lambda}}},
                         {"gmm_components", md.gmm_components},
                         {"n_chunks", md.n_chunks},
                         {"n_train", md.n_train},
                         {"n_test", md.n_test}};
    }
    return detail::dump_json(j) + "\n";
}

} // namespace statstok
