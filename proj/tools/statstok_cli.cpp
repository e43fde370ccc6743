// Command-line front end. Talks to the library only through the C API.
//
//   statstok gen --spec regimes.txt --seed 7 --out series.csv
//   statstok detect --input series.csv --out splits.json
//   statstok summarize --input series.csv --method mean --out result.json
//   statstok eval-cp --pred splits.json --truth series.csv.truth.json --tol 20
//   statstok eval-knn --train train.manifest --test test.manifest --method mean
//   statstok eval-noise --train train.manifest --test test.manifest --sigmas 0,0.5,1
//
// Exit codes: 0 success, 1 usage/flag errors, 2 data/parse errors,
// 3 internal invariant violations.

#include "statstok/statstok.h"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

/// Raised for problems the user fixes by changing flags or the config file.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
    ApiError(stk_status s, const std::string& what) : std::runtime_error(what), status(s) {}
    stk_status status;
};

void check(stk_status status) {
    if (status != STK_OK) {
        throw ApiError(status, std::string(stk_status_string(status)) + ": " + stk_last_error());
    }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using SeriesPtr = std::unique_ptr<stk_series, Deleter<stk_series, stk_series_destroy>>;
using DatasetPtr = std::unique_ptr<stk_dataset, Deleter<stk_dataset, stk_dataset_destroy>>;
using SpecPtr = std::unique_ptr<stk_regime_spec, Deleter<stk_regime_spec, stk_regime_spec_destroy>>;
using DetectionPtr = std::unique_ptr<stk_detection, Deleter<stk_detection, stk_detection_destroy>>;
using ResultPtr = std::unique_ptr<stk_result, Deleter<stk_result, stk_result_destroy>>;
using StringPtr = std::unique_ptr<char, Deleter<char, stk_string_free>>;
using SplitsPtr = std::unique_ptr<size_t, Deleter<size_t, stk_splits_free>>;

std::string take(char* s) {
    StringPtr owner(s);
    return owner ? std::string(owner.get()) : std::string();
}

std::string read_file(const std::string& path) {
    char* text = nullptr;
    check(stk_read_text_file(path.c_str(), &text));
    return take(text);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    check(stk_write_text_file(path.c_str(), text.c_str()));
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// ---- configuration -------------------------------------------------------

const char* const kConfigKeys[] = {
    "delta_min", "delta_max", "delta_step", "stride", "alpha", "s_min", "epsilon", "lambda",
    "method", "methods", "seed", "k", "chunks", "sigmas", "threads", "tol",
    "input", "out", "format", "train", "test",
};

/// `key = value` lines; '#' starts a comment; unknown keys are rejected.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::map<std::string, std::string> values;
    std::stringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        bool known = false;
        for (const char* k : kConfigKeys) known = known || key == k;
        if (!known) throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        values[key] = trim(line.substr(eq + 1));
    }
    return values;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw UsageError("bad value '" + text + "' for '" + key + "'");
    }
    return value;
}

template <>
std::string parse_value<std::string>(const std::string&, const std::string& text) {
    return text;
}

/// Flag value if given, else config-file value, else the default.
template <typename T>
T resolve(const std::optional<T>& flag, const std::map<std::string, std::string>& file,
          const std::string& key, T fallback) {
    if (flag) return *flag;
    if (auto it = file.find(key); it != file.end()) return parse_value<T>(key, it->second);
    return fallback;
}

/// Options shared by every subcommand that runs the tokenizer.
struct TokenizerFlags {
    std::optional<size_t> delta_min, delta_max, delta_step, stride, s_min;
    std::optional<double> alpha, epsilon, lambda;
    std::optional<unsigned> threads;
    std::string config_path;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "key = value configuration file");
        app.add_option("--delta-min", delta_min, "smallest window size");
        app.add_option("--delta-max", delta_max, "largest window size (clamped to T/2)");
        app.add_option("--delta-step", delta_step, "window size increment");
        app.add_option("--stride", stride, "candidate position stride");
        app.add_option("--alpha", alpha, "threshold multiplier");
        app.add_option("--s-min", s_min, "minimum separation between splits");
        app.add_option("--epsilon", epsilon, "covariance regularizer");
        app.add_option("--lambda", lambda, "BIC penalty weight");
        app.add_option("--threads", threads, "worker threads (results do not depend on it)");
    }

    std::map<std::string, std::string> file() const {
        return config_path.empty() ? std::map<std::string, std::string>{} : load_config(config_path);
    }

    stk_config config(const std::map<std::string, std::string>& f) const {
        stk_config cfg;
        stk_config_default(&cfg);
        cfg.delta_min = resolve(delta_min, f, "delta_min", cfg.delta_min);
        cfg.delta_max = resolve(delta_max, f, "delta_max", cfg.delta_max);
        cfg.delta_step = resolve(delta_step, f, "delta_step", cfg.delta_step);
        cfg.stride = resolve(stride, f, "stride", cfg.stride);
        cfg.s_min = resolve(s_min, f, "s_min", cfg.s_min);
        cfg.alpha = resolve(alpha, f, "alpha", cfg.alpha);
        cfg.epsilon = resolve(epsilon, f, "epsilon", cfg.epsilon);
        cfg.lambda = resolve(lambda, f, "lambda", cfg.lambda);
        if (stk_config_validate(&cfg) != STK_OK) throw UsageError(stk_last_error());
        return cfg;
    }

    unsigned thread_count(const std::map<std::string, std::string>& f) const {
        return resolve(threads, f, "threads", 1u);
    }
};

void log_config(const char* command, const stk_config& cfg,
                const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ostringstream out;
    out << "statstok " << command << ": delta_min=" << cfg.delta_min << " delta_max=" << cfg.delta_max
        << " delta_step=" << cfg.delta_step << " stride=" << cfg.stride << " alpha=" << cfg.alpha
        << " s_min=" << cfg.s_min << " epsilon=" << cfg.epsilon << " lambda=" << cfg.lambda;
    for (const auto& [k, v] : extra) out << ' ' << k << '=' << v;
    std::cerr << out.str() << '\n';
}

stk_format parse_format(const std::string& name, bool allow_manifest) {
    if (name == "csv") return STK_FORMAT_CSV;
    if (name == "rows") return STK_FORMAT_ROWS;
    if (allow_manifest && name == "manifest") return STK_FORMAT_MANIFEST;
    throw UsageError("unknown format '" + name + "'");
}

stk_method parse_method(const std::string& name) {
    stk_method m;
    if (stk_method_parse(name.c_str(), &m) != STK_OK) throw UsageError(stk_last_error());
    return m;
}

std::vector<stk_method> parse_methods(const std::string& list) {
    std::vector<stk_method> out;
    for (const auto& name : split_list(list)) out.push_back(parse_method(name));
    if (out.empty()) throw UsageError("no summary methods given");
    return out;
}

std::vector<double> parse_sigmas(const std::string& list) {
    std::vector<double> out;
    for (const auto& item : split_list(list)) out.push_back(parse_value<double>("sigmas", item));
    if (out.empty()) throw UsageError("no noise levels given");
    return out;
}

DatasetPtr load_dataset(const std::string& path, stk_format format) {
    stk_dataset* ds = nullptr;
    check(stk_dataset_read(path.c_str(), format, &ds));
    return DatasetPtr(ds);
}

/// Joins per-series JSON documents under {"results": [...]}.
std::string wrap_results(const std::vector<std::string>& docs) {
    if (docs.size() == 1) return docs.front();
    std::string out = "{\n  \"results\": [\n";
    for (size_t i = 0; i < docs.size(); ++i) {
        std::string doc = docs[i];
        while (!doc.empty() && doc.back() == '\n') doc.pop_back();
        std::string indented = "    ";
        for (char c : doc) {
            indented += c;
            if (c == '\n') indented += "    ";
        }
        out += indented;
        out += i + 1 < docs.size() ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

// ---- subcommands -----------------------------------------------------------

struct GenArgs {
    std::string spec, out, truth;
    uint64_t seed = 0;
};

int run_gen(const GenArgs& a) {
    std::cerr << "statstok gen: spec=" << a.spec << " seed=" << a.seed << " out=" << a.out << '\n';
    stk_regime_spec* raw_spec = nullptr;
    check(stk_regime_spec_read(a.spec.c_str(), &raw_spec));
    SpecPtr spec(raw_spec);
    stk_series* raw_series = nullptr;
    char* truth = nullptr;
    check(stk_generate(spec.get(), a.seed, &raw_series, &truth));
    SeriesPtr series(raw_series);
    const std::string truth_json = take(truth);
    check(stk_series_write_csv(series.get(), a.out.c_str()));
    emit(a.truth.empty() ? a.out + ".truth.json" : a.truth, truth_json);
    return kOk;
}

struct SeriesArgs {
    TokenizerFlags tok;
    std::optional<std::string> input, format, out;
};

struct DetectArgs : SeriesArgs {
    std::string dump_scores;
};

int run_detect(const DetectArgs& a) {
    const auto file = a.tok.file();
    const stk_config cfg = a.tok.config(file);
    const unsigned threads = a.tok.thread_count(file);
    const std::string input = resolve(a.input, file, "input", std::string());
    const std::string format = resolve(a.format, file, "format", std::string("csv"));
    const std::string out = resolve(a.out, file, "out", std::string("-"));
    if (input.empty()) throw UsageError("--input is required");
    log_config("detect", cfg, {{"input", input}, {"format", format}, {"out", out}});

    DatasetPtr ds = load_dataset(input, parse_format(format, false));
    std::vector<std::string> docs;
    std::string scores;
    for (size_t i = 0; i < stk_dataset_size(ds.get()); ++i) {
        stk_series* raw = nullptr;
        check(stk_dataset_get(ds.get(), i, &raw));
        SeriesPtr series(raw);
        stk_detection* raw_det = nullptr;
        check(stk_detect(series.get(), &cfg, threads, &raw_det));
        DetectionPtr det(raw_det);
        char* json = nullptr;
        check(stk_detection_to_json(det.get(), &json));
        docs.push_back(take(json));
        if (!a.dump_scores.empty()) {
            char* csv = nullptr;
            check(stk_detection_scores_csv(det.get(), &csv));
            std::string text = take(csv);
            if (i > 0) text.erase(0, text.find('\n') + 1); // one header only
            scores += text;
        }
    }
    emit(out, wrap_results(docs));
    if (!a.dump_scores.empty()) emit(a.dump_scores, scores);
    return kOk;
}

struct SummarizeArgs : SeriesArgs {
    std::optional<std::string> method;
    std::optional<size_t> k, chunks;
    std::optional<uint64_t> seed;
};

int run_summarize(const SummarizeArgs& a) {
    const auto file = a.tok.file();
    const stk_config cfg = a.tok.config(file);
    stk_options opts;
    stk_options_default(&opts);
    opts.threads = a.tok.thread_count(file);
    opts.method = parse_method(resolve(a.method, file, "method", std::string("mean")));
    opts.gmm_components = resolve(a.k, file, "k", opts.gmm_components);
    opts.n_chunks = resolve(a.chunks, file, "chunks", opts.n_chunks);
    opts.seed = resolve(a.seed, file, "seed", opts.seed);
    const std::string input = resolve(a.input, file, "input", std::string());
    const std::string format = resolve(a.format, file, "format", std::string("csv"));
    const std::string out = resolve(a.out, file, "out", std::string("-"));
    if (input.empty()) throw UsageError("--input is required");
    if (opts.gmm_components < 1) throw UsageError("--k must be >= 1");
    if (opts.n_chunks < 1) throw UsageError("--chunks must be >= 1");
    log_config("summarize", cfg,
               {{"method", stk_method_name(opts.method)}, {"k", std::to_string(opts.gmm_components)},
                {"chunks", std::to_string(opts.n_chunks)}, {"seed", std::to_string(opts.seed)},
                {"input", input}, {"format", format}, {"out", out}});

    DatasetPtr ds = load_dataset(input, parse_format(format, false));
    std::vector<std::string> docs;
    for (size_t i = 0; i < stk_dataset_size(ds.get()); ++i) {
        stk_series* raw = nullptr;
        check(stk_dataset_get(ds.get(), i, &raw));
        SeriesPtr series(raw);
        stk_result* raw_result = nullptr;
        check(stk_summarize(series.get(), &cfg, &opts, &raw_result));
        ResultPtr result(raw_result);
        char* json = nullptr;
        check(stk_result_to_json(result.get(), &json));
        docs.push_back(take(json));
    }
    emit(out, wrap_results(docs));
    return kOk;
}

struct EvalCpArgs {
    std::string pred, truth;
    size_t tol = 20;
};

std::vector<size_t> read_splits(const std::string& path) {
    const std::string text = read_file(path);
    size_t* raw = nullptr;
    size_t count = 0;
    check(stk_splits_from_json(text.c_str(), &raw, &count));
    SplitsPtr owner(raw);
    return std::vector<size_t>(raw, raw + count);
}

int run_eval_cp(const EvalCpArgs& a) {
    std::cerr << "statstok eval-cp: pred=" << a.pred << " truth=" << a.truth << " tol=" << a.tol << '\n';
    const auto pred = read_splits(a.pred);
    const auto truth = read_splits(a.truth);
    stk_prf prf;
    check(stk_change_point_prf(pred.data(), pred.size(), truth.data(), truth.size(), a.tol, &prf));
    char* json = nullptr;
    check(stk_prf_to_json(&prf, &json));
    emit("-", take(json));
    return kOk;
}

struct EvalArgs {
    TokenizerFlags tok;
    std::optional<std::string> train, test, format, methods, sigmas;
    std::optional<size_t> k, chunks;
    std::optional<uint64_t> seed;
};

struct EvalSetup {
    stk_config cfg;
    stk_options opts;
    DatasetPtr train, test;
    std::vector<stk_method> methods;
};

EvalSetup prepare_eval(const EvalArgs& a, const char* command, const std::string& default_methods,
                       std::vector<std::pair<std::string, std::string>> extra,
                       const std::map<std::string, std::string>& file) {
    EvalSetup s;
    s.cfg = a.tok.config(file);
    stk_options_default(&s.opts);
    s.opts.threads = a.tok.thread_count(file);
    s.opts.gmm_components = resolve(a.k, file, "k", s.opts.gmm_components);
    s.opts.n_chunks = resolve(a.chunks, file, "chunks", s.opts.n_chunks);
    s.opts.seed = resolve(a.seed, file, "seed", s.opts.seed);
    const std::string methods = resolve(a.methods, file, "methods",
                                        resolve(std::optional<std::string>{}, file, "method", default_methods));
    s.methods = parse_methods(methods);
    const std::string train = resolve(a.train, file, "train", std::string());
    const std::string test = resolve(a.test, file, "test", std::string());
    const std::string format = resolve(a.format, file, "format", std::string("manifest"));
    if (train.empty() || test.empty()) throw UsageError("--train and --test are required");
    if (s.opts.gmm_components < 1) throw UsageError("--k must be >= 1");
    if (s.opts.n_chunks < 1) throw UsageError("--chunks must be >= 1");
    extra.insert(extra.begin(), {{"methods", methods}, {"k", std::to_string(s.opts.gmm_components)},
                                 {"chunks", std::to_string(s.opts.n_chunks)},
                                 {"seed", std::to_string(s.opts.seed)}, {"train", train},
                                 {"test", test}, {"format", format}});
    log_config(command, s.cfg, extra);
    const stk_format fmt = parse_format(format, true);
    s.train = load_dataset(train, fmt);
    s.test = load_dataset(test, fmt);
    return s;
}

int run_eval_knn(const EvalArgs& a) {
    const auto file = a.tok.file();
    EvalSetup s = prepare_eval(a, "eval-knn", "mean", {}, file);
    char* json = nullptr;
    check(stk_eval_knn(s.train.get(), s.test.get(), s.methods.data(), s.methods.size(), &s.cfg, &s.opts,
                       &json));
    emit("-", take(json));
    return kOk;
}

int run_eval_noise(const EvalArgs& a) {
    const auto file = a.tok.file();
    const std::string sigma_list = resolve(a.sigmas, file, "sigmas", std::string("0,0.5"));
    const auto sigmas = parse_sigmas(sigma_list);
    EvalSetup s = prepare_eval(a, "eval-noise", "mean,uniform,gmm", {{"sigmas", sigma_list}}, file);
    char* json = nullptr;
    check(stk_eval_noise(s.train.get(), s.test.get(), sigmas.data(), sigmas.size(), s.methods.data(),
                         s.methods.size(), &s.cfg, &s.opts, &json));
    emit("-", take(json));
    return kOk;
}

int exit_code_for(stk_status status) {
    switch (status) {
    case STK_INTERNAL_ERROR: return kInternal;
    default: return kData;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-aware time series tokenization and summarization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(stk_version()));

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a piecewise-Gaussian series with ground truth");
    gen_cmd->add_option("--spec", gen.spec, "regime spec file")->required();
    gen_cmd->add_option("--seed", gen.seed, "random seed");
    gen_cmd->add_option("--out", gen.out, "output matrix CSV")->required();
    gen_cmd->add_option("--truth", gen.truth, "truth JSON (default <out>.truth.json)");

    DetectArgs detect;
    auto* detect_cmd = app.add_subcommand("detect", "detect split points");
    detect.tok.attach(*detect_cmd);
    detect_cmd->add_option("--input", detect.input, "input series file");
    detect_cmd->add_option("--format", detect.format, "csv | rows")->check(CLI::IsMember({"csv", "rows"}));
    detect_cmd->add_option("--out", detect.out, "output JSON (default stdout)");
    detect_cmd->add_option("--dump-scores", detect.dump_scores, "write position,score,scale CSV");

    SummarizeArgs summarize;
    auto* summarize_cmd = app.add_subcommand("summarize", "tokenize and summarize");
    summarize.tok.attach(*summarize_cmd);
    summarize_cmd->add_option("--input", summarize.input, "input series file");
    summarize_cmd->add_option("--format", summarize.format, "csv | rows")->check(CLI::IsMember({"csv", "rows"}));
    summarize_cmd->add_option("--out", summarize.out, "output JSON (default stdout)");
    summarize_cmd->add_option("--method", summarize.method, "mean | gmm | uniform")
        ->check(CLI::IsMember({"mean", "gmm", "uniform"}));
    summarize_cmd->add_option("--k", summarize.k, "GMM components");
    summarize_cmd->add_option("--chunks", summarize.chunks, "uniform chunk count");
    summarize_cmd->add_option("--seed", summarize.seed, "GMM seed");

    EvalCpArgs eval_cp;
    auto* eval_cp_cmd = app.add_subcommand("eval-cp", "precision/recall/F1 of detected splits");
    eval_cp_cmd->add_option("--pred", eval_cp.pred, "JSON with predicted splits")->required();
    eval_cp_cmd->add_option("--truth", eval_cp.truth, "JSON with true splits")->required();
    eval_cp_cmd->add_option("--tol", eval_cp.tol, "matching tolerance in timesteps");

    auto attach_eval = [](CLI::App& cmd, EvalArgs& a, bool noise) {
        a.tok.attach(cmd);
        cmd.add_option("--train", a.train, "training manifest");
        cmd.add_option("--test", a.test, "test manifest");
        cmd.add_option("--format", a.format, "manifest | rows")
            ->check(CLI::IsMember({"manifest", "rows"}));
        cmd.add_option("--method,--methods", a.methods, "comma-separated summary methods");
        cmd.add_option("--k", a.k, "GMM components");
        cmd.add_option("--chunks", a.chunks, "uniform chunk count");
        cmd.add_option("--seed", a.seed, "seed for GMM fits and noise");
        if (noise) cmd.add_option("--sigmas", a.sigmas, "comma-separated noise levels");
    };
    EvalArgs eval_knn;
    auto* eval_knn_cmd = app.add_subcommand("eval-knn", "1-NN DTW accuracy on summarized series");
    attach_eval(*eval_knn_cmd, eval_knn, false);
    EvalArgs eval_noise;
    auto* eval_noise_cmd = app.add_subcommand("eval-noise", "1-NN accuracy under additive noise");
    attach_eval(*eval_noise_cmd, eval_noise, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        std::cout << stk_version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*detect_cmd) return run_detect(detect);
        if (*summarize_cmd) return run_summarize(summarize);
        if (*eval_cp_cmd) return run_eval_cp(eval_cp);
        if (*eval_knn_cmd) return run_eval_knn(eval_knn);
        if (*eval_noise_cmd) return run_eval_noise(eval_noise);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ApiError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.status);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
