#include "statstok/tokenizer.hpp"

#include "parallel.hpp"
#include "statstok/error.hpp"
#include "statstok/gaussian_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace statstok {

namespace {

constexpr double kDegenerateSigma = 1e-12;

} // namespace

void validate(const TokenizerConfig& cfg) {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidInput, msg); };
    if (cfg.delta_min < 2) fail("delta_min must be >= 2");
    if (cfg.delta_max < cfg.delta_min) fail("delta_max must be >= delta_min");
    if (cfg.delta_step < 1) fail("delta_step must be >= 1");
    if (cfg.stride < 1) fail("stride must be >= 1");
    if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) fail("alpha must be finite and >= 0");
    if (cfg.s_min < 1) fail("s_min must be >= 1");
    if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) fail("epsilon must be finite and >= 0");
    if (!std::isfinite(cfg.lambda)) fail("lambda must be finite");
}

Segmentation::Segmentation(std::size_t length, std::vector<std::size_t> splits)
    : length_(length), splits_(std::move(splits)) {
    if (length_ == 0) throw Error(ErrorCode::InvalidInput, "segmentation of an empty series");
    std::size_t prev = 0;
    for (std::size_t s : splits_) {
        if (s <= prev || s >= length_) {
            throw Error(ErrorCode::InvalidInput,
                        "split " + std::to_string(s) + " is not strictly increasing inside (0, " +
                            std::to_string(length_) + ")");
        }
        prev = s;
    }
}

std::vector<Segment> Segmentation::segments() const {
    std::vector<Segment> out;
    out.reserve(splits_.size() + 1);
    std::size_t begin = 0;
    for (std::size_t s : splits_) {
        out.push_back({begin, s});
        begin = s;
    }
    out.push_back({begin, length_});
    return out;
}

std::vector<ChangeCandidate> score_scale(const TimeSeries& series, std::size_t delta,
                                         const TokenizerConfig& cfg) {
    const std::size_t length = series.length();
    if (delta < 2) throw Error(ErrorCode::InvalidInput, "score_scale: delta must be >= 2");
    if (2 * delta > length) {
        throw Error(ErrorCode::EmptyScale, "score_scale: 2*delta = " + std::to_string(2 * delta) +
                                               " exceeds series length " + std::to_string(length));
    }
    if (cfg.stride < 1) throw Error(ErrorCode::InvalidInput, "score_scale: stride must be >= 1");

    std::vector<ChangeCandidate> out;
    out.reserve((length - 2 * delta) / cfg.stride + 1);
    for (std::size_t t = delta; t + delta <= length; t += cfg.stride) {
        const double score = delta_bic(series.values.slice_rows(t - delta, t),
                                       series.values.slice_rows(t, t + delta), cfg.epsilon);
        out.push_back({t, score, delta});
    }
    return out;
}

std::pair<ScaleStats, std::vector<ChangeCandidate>>
threshold_candidates(const std::vector<ChangeCandidate>& scored, double alpha) {
    if (scored.empty()) throw Error(ErrorCode::EmptyScale, "threshold_candidates: no scores");
    const std::size_t scale = scored.front().scale;
    double sum = 0.0;
    for (const auto& c : scored) {
        if (c.scale != scale) {
            throw Error(ErrorCode::InvalidInput, "threshold_candidates: scores from mixed scales");
        }
        sum += c.score;
    }
    const double count = static_cast<double>(scored.size());
    const double mu = sum / count;
    double ss = 0.0;
    for (const auto& c : scored) ss += (c.score - mu) * (c.score - mu);
    const double sigma = std::sqrt(ss / count);

    ScaleStats stats{scale, mu, sigma};
    std::vector<ChangeCandidate> kept;
    if (sigma < kDegenerateSigma) return {stats, kept};
    const double threshold = mu + alpha * sigma;
    for (const auto& c : scored) {
        if (c.score >= threshold) kept.push_back(c);
    }
    return {stats, kept};
}

std::vector<std::size_t> non_max_suppression(std::vector<ChangeCandidate> candidates,
                                             std::size_t s_min) {
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.position < b.position;
    });
    std::vector<std::size_t> accepted;
    for (const auto& c : candidates) {
        const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](std::size_t p) {
            const std::size_t gap = p > c.position ? p - c.position : c.position - p;
            return gap < s_min;
        });
        if (clear) accepted.push_back(c.position);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

std::vector<std::size_t> applicable_scales(std::size_t length, const TokenizerConfig& cfg) {
    std::vector<std::size_t> scales;
    const std::size_t upper = std::min(cfg.delta_max, length / 2);
    for (std::size_t delta = cfg.delta_min; delta <= upper; delta += cfg.delta_step) {
        scales.push_back(delta);
    }
    return scales;
}

Detection detect(const TimeSeries& series, const TokenizerConfig& cfg, unsigned threads) {
    validate(cfg);
    validate(series);

    const std::vector<std::size_t> scales = applicable_scales(series.length(), cfg);
    struct PerScale {
        std::vector<ChangeCandidate> scored;
        ScaleStats stats;
        std::vector<ChangeCandidate> kept;
    };
    std::vector<PerScale> per_scale(scales.size());
    detail::parallel_for(scales.size(), threads, [&](std::size_t i) {
        auto& slot = per_scale[i];
        slot.scored = score_scale(series, scales[i], cfg);
        std::tie(slot.stats, slot.kept) = threshold_candidates(slot.scored, cfg.alpha);
    });

    Detection out;
    std::map<std::size_t, ChangeCandidate> pooled;
    for (auto& slot : per_scale) {
        out.scale_stats.push_back(slot.stats);
        for (const auto& c : slot.kept) {
            auto [it, inserted] = pooled.emplace(c.position, c);
            if (!inserted && c.score > it->second.score) it->second = c;
        }
        out.scores.insert(out.scores.end(), slot.scored.begin(), slot.scored.end());
    }
    for (const auto& [pos, c] : pooled) out.candidates.push_back(c);

    out.segmentation = Segmentation(series.length(), non_max_suppression(out.candidates, cfg.s_min));
    return out;
}

Segmentation detect_splits(const TimeSeries& series, const TokenizerConfig& cfg,
                           unsigned threads) {
    return detect(series, cfg, threads).segmentation;
}

double segmentation_cost(const TimeSeries& series, const Segmentation& seg,
                         const TokenizerConfig& cfg) {
    validate(series);
    if (seg.length() != series.length()) {
        throw Error(ErrorCode::InvalidInput, "segmentation_cost: segmentation covers [0, " +
                                                 std::to_string(seg.length()) +
                                                 ") but the series has " +
                                                 std::to_string(series.length()) + " rows");
    }
    const std::size_t d = series.dims();
    const double k = static_cast<double>(gaussian_free_parameters(d));
    double cost = 0.0;
    for (const Segment& s : seg.segments()) {
        const double n = static_cast<double>(s.size());
        double log_det = 0.0;
        if (s.size() == 1) {
            if (!(cfg.epsilon > 0.0)) {
                throw Error(ErrorCode::SingularCovariance,
                            "segmentation_cost: length-1 segment with epsilon = 0");
            }
            log_det = static_cast<double>(d) * std::log(cfg.epsilon);
        } else {
            log_det = ml_covariance(series.values.slice_rows(s.begin, s.end), cfg.epsilon).log_det;
        }
        cost += -0.5 * n * log_det + 0.5 * k * std::log(n);
    }
    return cost;
}

} // namespace statstok
