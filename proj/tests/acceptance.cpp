// Acceptance runner. `acceptance` runs every criterion; `acceptance N` runs
// one. Each criterion prints a single PASS/FAIL line and the exit status is
// non-zero if any selected criterion fails.

#include "corpus.hpp"
#include "oracles.hpp"

#include "statstok/dataio.hpp"
#include "statstok/eval.hpp"
#include "statstok/gaussian_stats.hpp"
#include "statstok/pipeline.hpp"
#include "statstok/summarizer.hpp"
#include "statstok/synth.hpp"
#include "statstok/tokenizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace statstok;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

oracle::Rows shifted_rows(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::uniform_real_distribution<double> shift(-3.0, 3.0), scale(0.2, 4.0);
    auto x = oracle::random_rows(rng, n, d);
    const double s = scale(rng);
    std::vector<double> offset(d);
    for (auto& o : offset) o = shift(rng);
    for (auto& r : x)
        for (std::size_t c = 0; c < d; ++c) r[c] = r[c] * s + offset[c];
    return x;
}

Outcome oracle_equivalence() {
    Stopwatch clock;
    std::mt19937_64 rng(20240601);
    const std::size_t dims[] = {1, 2, 5};
    const std::size_t deltas[] = {5, 20};
    double worst_reg = 0.0, worst_ml = 0.0, worst_seg = 0.0;
    std::size_t ml_pairs = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
        const std::size_t d = dims[i % 3];
        const std::size_t delta = deltas[(i / 3) % 2];
        const auto a = shifted_rows(rng, delta, d);
        const auto b = shifted_rows(rng, delta, d);
        const Matrix ma = Matrix::from_rows(a), mb = Matrix::from_rows(b);

        // Regularized scores against the independent log-determinant route.
        worst_reg = std::max(worst_reg, oracle::relative_error(delta_bic(ma, mb, 1e-6),
                                                               oracle::delta_bic(a, b, 1e-6)));
        worst_seg = std::max(worst_seg, oracle::relative_error(bic_segment(ma, 1.0, 1e-6),
                                                               oracle::bic_segment(a, 1.0, 1e-6)));
        // Unregularized scores against maximized Gaussian likelihoods, wherever
        // the ML covariance exists (delta > d).
        if (delta > d) {
            ++ml_pairs;
            worst_ml = std::max(worst_ml, oracle::relative_error(delta_bic(ma, mb, 0.0),
                                                                 oracle::delta_bic_likelihood(a, b)));
        }
    }
    const double secs = clock.seconds();
    const double worst = std::max({worst_reg, worst_ml, worst_seg});
    return {worst <= 1e-9 && secs < 10.0,
            fmt("max rel err %.3g (likelihood route %.3g over %zu pairs, regularized %.3g, bic_segment %.3g), %.2fs",
                worst, worst_ml, ml_pairs, worst_reg, worst_seg, secs)};
}

Outcome identity_invariant() {
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t d = 1 + rng() % 4;
        const std::size_t delta = d + 1 + rng() % 30;
        const Matrix w = Matrix::from_rows(shifted_rows(rng, delta, d));
        const double k = static_cast<double>(gaussian_free_parameters(d));
        worst = std::max(worst, std::fabs(delta_bic(w, w, 0.0) - k * std::log(2.0 * double(delta))));
    }
    return {worst <= 1e-12, fmt("max abs err %.3g over 100 windows", worst)};
}

struct CorpusRun {
    std::vector<StatsResult> results;
    std::vector<std::vector<std::size_t>> truths;
};

CorpusRun run_corpus(std::size_t count, const std::function<std::size_t(std::uint64_t)>& length_of) {
    CorpusRun run;
    for (std::uint64_t seed = 0; seed < count; ++seed) {
        const auto g = testing_corpus::regime_series(seed, length_of(seed));
        run.results.push_back(stats_summarize(g.series, TokenizerConfig{}));
        run.truths.push_back(g.true_splits);
    }
    return run;
}

const CorpusRun& long_corpus() {
    static const CorpusRun run = run_corpus(100, [](std::uint64_t) { return std::size_t{1000}; });
    return run;
}

Outcome change_recovery() {
    Stopwatch clock;
    const auto& run = long_corpus();
    const double secs = clock.seconds();
    double matched_p = 0.0, matched_r = 0.0, n_pred = 0.0, n_true = 0.0, mean_p = 0.0, mean_r = 0.0;
    for (std::size_t i = 0; i < run.results.size(); ++i) {
        const auto& pred = run.results[i].segmentation.splits();
        const auto prf = change_point_prf(pred, run.truths[i], 20);
        matched_p += prf.precision * double(pred.size());
        matched_r += prf.recall * double(run.truths[i].size());
        n_pred += double(pred.size());
        n_true += double(run.truths[i].size());
        mean_p += prf.precision;
        mean_r += prf.recall;
    }
    const double p = n_pred > 0 ? matched_p / n_pred : 0.0;
    const double r = matched_r / n_true;
    const double n = double(run.results.size());
    return {r >= 0.9 && p >= 0.7 && secs < 60.0,
            fmt("pooled precision %.3f recall %.3f (per-series mean %.3f / %.3f), %.1f predicted vs %.1f true "
                "splits per series, %.1fs",
                p, r, mean_p / n, mean_r / n, n_pred / n, n_true / n, secs)};
}

Outcome compression_band() {
    const auto& long_run = long_corpus();
    const auto short_run = run_corpus(100, [](std::uint64_t seed) { return std::size_t{400 + (seed * 37) % 201}; });
    const auto a = compression_stats(long_run.results);
    const auto b = compression_stats(short_run.results);
    const auto in_band = [](double r) { return r >= 10.0 && r <= 60.0; };
    return {in_band(a.ratio) && in_band(b.ratio),
            fmt("T=1000: %.1f tokens, ratio %.1f; T=400..600 (mean %.0f): %.1f tokens, ratio %.1f", a.mean_token_count,
                a.ratio, b.mean_original_length, b.mean_token_count, b.ratio)};
}

Outcome exact_mean_tokens() {
    std::mt19937_64 rng(555);
    double worst = 0.0;
    std::size_t tokens = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 300;
        const std::size_t d = 1 + rng() % 4;
        TimeSeries s;
        s.values = Matrix::from_rows(shifted_rows(rng, n, d));
        std::vector<std::size_t> splits;
        const std::size_t every = 2 + rng() % 40;
        for (std::size_t p = 1; p < n; ++p)
            if (rng() % every == 0) splits.push_back(p);
        const Segmentation seg(n, splits);
        const auto out = summarize_mean(s, seg);
        const auto segments = seg.segments();
        if (out.token_count() != segments.size()) return {false, fmt("trial %d: token count mismatch", trial)};
        for (std::size_t i = 0; i < segments.size(); ++i) {
            for (std::size_t c = 0; c < d; ++c) {
                long double sum = 0.0L;
                for (std::size_t t = segments[i].begin; t < segments[i].end; ++t) sum += s.values(t, c);
                const long double want = sum / static_cast<long double>(segments[i].size());
                worst = std::max(worst, static_cast<double>(std::fabs(out.tokens(i, c) - want)));
            }
            ++tokens;
        }
    }
    return {worst <= 1e-12, fmt("max abs err %.3g over %zu tokens in 1000 cases", worst, tokens)};
}

Outcome nms_invariants() {
    std::mt19937_64 rng(6006);
    std::size_t min_gap_seen = SIZE_MAX;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t s_min = 1 + rng() % 50;
        const std::size_t n = 1 + rng() % 60;
        const bool coarse = trial % 3 == 0; // exercise score ties
        std::vector<ChangeCandidate> cands;
        std::vector<bool> used(1001, false);
        while (cands.size() < n) {
            const std::size_t p = 1 + rng() % 1000;
            if (used[p]) continue;
            used[p] = true;
            const double score = coarse ? double(rng() % 4) : std::ldexp(double(rng() >> 11), -53) * 50.0;
            cands.push_back({p, score, 5});
        }
        const auto kept = non_max_suppression(cands, s_min);
        for (std::size_t i = 1; i < kept.size(); ++i) {
            const std::size_t g = kept[i] - kept[i - 1];
            if (g < s_min) return {false, fmt("trial %d: gap %zu < s_min %zu", trial, g, s_min)};
            min_gap_seen = std::min(min_gap_seen, g - s_min);
        }
        const auto accepted = [&](std::size_t p) { return std::binary_search(kept.begin(), kept.end(), p); };
        const auto outranks = [](const ChangeCandidate& a, const ChangeCandidate& b) {
            return a.score > b.score || (a.score == b.score && a.position < b.position);
        };
        for (const auto& c : cands) {
            bool blocked = false;
            for (const auto& o : cands) {
                const std::size_t g = o.position > c.position ? o.position - c.position : c.position - o.position;
                if (o.position != c.position && g < s_min && outranks(o, c) && accepted(o.position)) blocked = true;
            }
            if (accepted(c.position) == blocked)
                return {false, fmt("trial %d: position %zu violates greedy maximality", trial, c.position)};
        }
    }
    return {true, "1000 candidate sets: gaps >= s_min, every rejection blocked by a stronger accepted split"};
}

Outcome em_monotonicity() {
    std::size_t total_steps = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        std::mt19937_64 rng(seed * 7919 + 1);
        const std::size_t d = 1 + seed % 4;
        const std::size_t k = 1 + seed % 5;
        const std::size_t n = 2 * k + rng() % 200;
        // Mixture of a few random blobs so EM has structure to find.
        std::vector<std::vector<double>> centres(1 + rng() % 4, std::vector<double>(d));
        std::normal_distribution<double> wide(0.0, 4.0), tight(0.0, 1.0);
        for (auto& c : centres)
            for (auto& v : c) v = wide(rng);
        Matrix pts(n, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < d; ++c) pts(i, c) = centres[i % centres.size()][c] + tight(rng);

        const auto model = fit_gmm(pts, k, seed);
        const auto& ll = model.log_likelihood;
        for (std::size_t i = 1; i < ll.size(); ++i)
            if (ll[i] < ll[i - 1])
                return {false, fmt("seed %llu: log-likelihood fell at step %zu (%.17g -> %.17g)",
                                   static_cast<unsigned long long>(seed), i, ll[i - 1], ll[i])};
        if (!(fit_gmm(pts, k, seed) == model))
            return {false, fmt("seed %llu: refit differs", static_cast<unsigned long long>(seed))};
        total_steps += ll.size();
    }
    return {true, fmt("500 fits, %zu log-likelihood evaluations, all non-decreasing and reproducible", total_steps)};
}

Outcome noise_attenuation() {
    const double sigma = 0.5;
    RegimeSpec spec;
    spec.dims = 3;
    spec.regimes = {{180, {0, 0, 0}, {0, 0, 0}},
                    {260, {4, -3, 2}, {0, 0, 0}},
                    {140, {-2, 1, 5}, {0, 0, 0}},
                    {420, {3, 3, -4}, {0, 0, 0}}};
    const auto clean = generate_piecewise_gaussian(spec, 1).series;
    const auto seg = stats_summarize(clean, TokenizerConfig{}).segmentation;
    const auto clean_tokens = summarize_mean(clean, seg);
    const auto segments = seg.segments();

    // sum over trials of squared token error, scaled by |S_i| / sigma^2
    std::vector<std::vector<double>> scaled(segments.size(), std::vector<double>(spec.dims, 0.0));
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto noisy = add_gaussian_noise(clean, sigma, 10'000 + t);
        const auto tokens = summarize_mean(noisy, seg);
        for (std::size_t i = 0; i < segments.size(); ++i)
            for (std::size_t c = 0; c < spec.dims; ++c) {
                const double e = tokens.tokens(i, c) - clean_tokens.tokens(i, c);
                scaled[i][c] += e * e * double(segments[i].size()) / (sigma * sigma);
            }
    }
    bool pass = true;
    std::ostringstream detail;
    detail << segments.size() << " segments; variance / (sigma^2/|S|) per channel:";
    double lo = 1e300, hi = 0.0;
    for (std::size_t c = 0; c < spec.dims; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const double r = scaled[i][c] / trials;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sum += r;
        }
        const double ratio = sum / double(segments.size());
        pass = pass && std::fabs(ratio - 1.0) <= 0.25;
        detail << fmt(" %.3f", ratio);
    }
    detail << fmt(" (single segments range %.3f..%.3f)", lo, hi);
    return {pass, detail.str()};
}

Outcome proxy_ordering() {
    const auto train = testing_corpus::two_class(901, 10, 200, "train");
    const auto test = testing_corpus::two_class(902, 10, 200, "test");
    SummaryOptions opts;
    opts.seed = 5;
    const auto report = run_noise_experiment(train, test, {0.0, 0.5}, {SummaryMethod::Mean, SummaryMethod::Uniform},
                                             TokenizerConfig{}, opts);
    bool pass = true;
    std::string detail;
    for (const auto& cell : *report.noise) {
        const double mean = cell.accuracies[0].accuracy, uniform = cell.accuracies[1].accuracy;
        pass = pass && mean >= 0.9 && mean >= uniform;
        detail += fmt("sigma %.1f: mean %.3f uniform %.3f; ", cell.sigma, mean, uniform);
    }
    detail.resize(detail.size() - 2);
    return {pass, detail};
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return status == 0 ? 0 : 1;
}

/// Runs the full CLI chain in `dir` and returns the concatenated outputs.
std::string cli_pipeline(const fs::path& dir, unsigned threads) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = "'" STATSTOK_CLI_PATH "'";
    const std::string t = " --threads " + std::to_string(threads);
    const auto in = [&](const std::string& cmd) { return "cd '" + dir.string() + "' && " + cmd + " 2>>log.txt"; };

    write_text_file(dir / "four.spec", "d = 2\n"
                                       "regime = 260 : 0, 0 : 1, 1\n"
                                       "regime = 240 : 4, -3 : 1, 1\n"
                                       "regime = 250 : 0, 1 : 1, 2\n"
                                       "regime = 250 : -4, 4 : 1, 1\n");
    write_text_file(dir / "up.spec", "regime = 90 : 0 : 1\nregime = 110 : 5 : 1\n");
    write_text_file(dir / "down.spec", "regime = 110 : 0 : 1\nregime = 90 : -5 : 1\n");

    int rc = 0;
    rc |= shell(in(cli + " gen --spec four.spec --seed 17 --out four.csv --truth four.truth.json"));
    rc |= shell(in(cli + " detect --input four.csv --out four.detect.json --dump-scores four.scores.csv" + t));
    rc |= shell(in(cli + " eval-cp --pred four.detect.json --truth four.truth.json > cp.json"));
    for (const char* m : {"mean", "gmm", "uniform"})
        rc |= shell(in(cli + " summarize --input four.csv --method " + m + " --seed 3 --out four." + m + ".json" + t));
    rc |= shell(in(cli + " eval-cp --pred four.mean.json --truth four.truth.json > cp_mean.json"));

    std::string train, test;
    for (int i = 0; i < 16; ++i) {
        const std::string name = "item" + std::to_string(i) + ".csv";
        const char* cls = i % 2 ? "up" : "down";
        rc |= shell(in(cli + " gen --spec " + cls + ".spec --seed " + std::to_string(100 + i) + " --out " + name));
        (i < 8 ? train : test) += name + "," + cls + "\n";
    }
    write_text_file(dir / "train.csv", train);
    write_text_file(dir / "test.csv", test);
    rc |= shell(in(cli + " eval-knn --train train.csv --test test.csv --methods mean,gmm,uniform --seed 2" + t +
                   " > knn.json"));
    rc |= shell(in(cli + " eval-noise --train train.csv --test test.csv --sigmas 0,0.5,1 --seed 2" + t +
                   " > noise.json"));
    if (rc != 0) return "command failed in " + dir.string() + ":\n" + read_text_file(dir / "log.txt");

    std::string all;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename() != "log.txt") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) all += "== " + f.filename().string() + "\n" + read_text_file(f);
    return all;
}

Outcome end_to_end_determinism() {
    const auto root = fs::temp_directory_path() / "statstok_acceptance";
    const auto a = cli_pipeline(root / "run1", 1);
    const auto b = cli_pipeline(root / "run2", 1);
    const auto c = cli_pipeline(root / "run3", 4);
    if (a.rfind("command failed", 0) == 0) return {false, a};
    const bool pass = a == b && a == c;
    return {pass, fmt("%zu bytes of outputs; repeat %s, threads 1 vs 4 %s", a.size(), a == b ? "identical" : "DIFFER",
                      a == c ? "identical" : "DIFFER")};
}

struct Criterion {
    const char* name;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"oracle equivalence", oracle_equivalence},
    {"identity invariant", identity_invariant},
    {"synthetic change recovery", change_recovery},
    {"compression band", compression_band},
    {"exact mean tokens", exact_mean_tokens},
    {"nms invariants", nms_invariants},
    {"em monotonicity", em_monotonicity},
    {"noise attenuation", noise_attenuation},
    {"proxy ordering", proxy_ordering},
    {"end-to-end determinism", end_to_end_determinism},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > 10) {
            std::fprintf(stderr, "usage: acceptance [1-10]...\n");
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty())
        for (int n = 1; n <= 10; ++n) selected.push_back(n);

    int failures = 0;
    for (int n : selected) {
        const auto& c = kCriteria[n - 1];
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%2d] %s %s: %s\n", n, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
