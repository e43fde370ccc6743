#include "statstok/statstok.h"

#include "statstok/dataio.hpp"
#include "statstok/error.hpp"
#include "statstok/eval.hpp"
#include "statstok/pipeline.hpp"
#include "statstok/synth.hpp"
#include "statstok/tokenizer.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct stk_series {
    statstok::TimeSeries value;
};

struct stk_dataset {
    statstok::Dataset value;
};

struct stk_regime_spec {
    statstok::RegimeSpec value;
};

struct stk_detection {
    statstok::Detection value;
    std::string id;
};

struct stk_result {
    statstok::StatsResult value;
};

namespace {

thread_local std::string last_error;

stk_status to_status(statstok::ErrorCode code) {
    using statstok::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidInput: return STK_INVALID_INPUT;
    case ErrorCode::InsufficientData: return STK_INSUFFICIENT_DATA;
    case ErrorCode::SingularCovariance: return STK_SINGULAR_COVARIANCE;
    case ErrorCode::EmptyScale: return STK_EMPTY_SCALE;
    case ErrorCode::TooFewPoints: return STK_TOO_FEW_POINTS;
    case ErrorCode::ParseError: return STK_PARSE_ERROR;
    case ErrorCode::EmptyDataset: return STK_EMPTY_DATASET;
    case ErrorCode::SchemaError: return STK_SCHEMA_ERROR;
    case ErrorCode::IoError: return STK_IO_ERROR;
    }
    return STK_INTERNAL_ERROR;
}

stk_status fail(stk_status status, const char* what) {
    last_error = what;
    return status;
}

template <typename Fn>
stk_status guarded(Fn&& fn) {
    try {
        fn();
        return STK_OK;
    } catch (const statstok::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(STK_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(STK_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(STK_INTERNAL_ERROR, "unknown failure");
    }
}

template <typename T>
T& deref(T* p, const char* name) {
    if (p == nullptr) {
        throw statstok::Error(statstok::ErrorCode::InvalidInput, std::string(name) + " is null");
    }
    return *p;
}

const char* cstr(const char* p, const char* name) {
    if (p == nullptr) {
        throw statstok::Error(statstok::ErrorCode::InvalidInput, std::string(name) + " is null");
    }
    return p;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

statstok::TokenizerConfig to_cpp(const stk_config& c) {
    statstok::TokenizerConfig cfg;
    cfg.delta_min = c.delta_min;
    cfg.delta_max = c.delta_max;
    cfg.delta_step = c.delta_step;
    cfg.stride = c.stride;
    cfg.s_min = c.s_min;
    cfg.alpha = c.alpha;
    cfg.epsilon = c.epsilon;
    cfg.lambda = c.lambda;
    return cfg;
}

statstok::SummaryMethod to_cpp(stk_method m) {
    switch (m) {
    case STK_METHOD_MEAN: return statstok::SummaryMethod::Mean;
    case STK_METHOD_GMM: return statstok::SummaryMethod::Gmm;
    case STK_METHOD_UNIFORM: return statstok::SummaryMethod::Uniform;
    }
    throw statstok::Error(statstok::ErrorCode::InvalidInput, "unknown summary method");
}

statstok::SummaryOptions to_cpp(const stk_options& o) {
    statstok::SummaryOptions opts;
    opts.method = to_cpp(o.method);
    opts.gmm_components = o.gmm_components;
    opts.n_chunks = o.n_chunks;
    opts.seed = o.seed;
    opts.threads = o.threads;
    return opts;
}

std::vector<statstok::SummaryMethod> to_cpp(const stk_method* methods, std::size_t n) {
    if (n > 0 && methods == nullptr) {
        throw statstok::Error(statstok::ErrorCode::InvalidInput, "methods is null");
    }
    std::vector<statstok::SummaryMethod> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(to_cpp(methods[i]));
    return out;
}

} // namespace

extern "C" {

const char* stk_version(void) { return "0.1.0"; }

const char* stk_status_string(stk_status status) {
    switch (status) {
    case STK_OK: return "ok";
    case STK_INVALID_INPUT: return "invalid input";
    case STK_INSUFFICIENT_DATA: return "insufficient data";
    case STK_SINGULAR_COVARIANCE: return "singular covariance";
    case STK_EMPTY_SCALE: return "empty scale";
    case STK_TOO_FEW_POINTS: return "too few points";
    case STK_PARSE_ERROR: return "parse error";
    case STK_EMPTY_DATASET: return "empty dataset";
    case STK_SCHEMA_ERROR: return "schema error";
    case STK_IO_ERROR: return "i/o error";
    case STK_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

const char* stk_last_error(void) { return last_error.c_str(); }

void stk_string_free(char* s) { std::free(s); }

void stk_config_default(stk_config* cfg) {
    if (cfg == nullptr) return;
    const statstok::TokenizerConfig d;
    cfg->delta_min = d.delta_min;
    cfg->delta_max = d.delta_max;
    cfg->delta_step = d.delta_step;
    cfg->stride = d.stride;
    cfg->s_min = d.s_min;
    cfg->alpha = d.alpha;
    cfg->epsilon = d.epsilon;
    cfg->lambda = d.lambda;
}

stk_status stk_config_validate(const stk_config* cfg) {
    return guarded([&] { statstok::validate(to_cpp(deref(cfg, "cfg"))); });
}

void stk_options_default(stk_options* opts) {
    if (opts == nullptr) return;
    opts->method = STK_METHOD_MEAN;
    opts->gmm_components = 5;
    opts->n_chunks = 10;
    opts->seed = 0;
    opts->threads = 1;
}

stk_status stk_method_parse(const char* name, stk_method* out) {
    return guarded([&] {
        switch (statstok::parse_summary_method(cstr(name, "name"))) {
        case statstok::SummaryMethod::Mean: deref(out, "out") = STK_METHOD_MEAN; break;
        case statstok::SummaryMethod::Gmm: deref(out, "out") = STK_METHOD_GMM; break;
        case statstok::SummaryMethod::Uniform: deref(out, "out") = STK_METHOD_UNIFORM; break;
        }
    });
}

const char* stk_method_name(stk_method method) {
    switch (method) {
    case STK_METHOD_MEAN: return "mean";
    case STK_METHOD_GMM: return "gmm";
    case STK_METHOD_UNIFORM: return "uniform";
    }
    return "unknown";
}

stk_status stk_series_create(const double* values, size_t length, size_t dims, const char* id,
                             stk_series** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        if (length > 0 && dims > 0 && values == nullptr) {
            throw statstok::Error(statstok::ErrorCode::InvalidInput, "values is null");
        }
        statstok::TimeSeries s;
        s.id = id ? id : "";
        s.values = statstok::Matrix(length, dims, std::vector<double>(values, values + length * dims));
        statstok::validate(s);
        *out = new stk_series{std::move(s)};
    });
}

stk_status stk_series_read_csv(const char* path, stk_series** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = new stk_series{statstok::parse_matrix_csv(cstr(path, "path"))};
    });
}

stk_status stk_series_write_csv(const stk_series* series, const char* path) {
    return guarded([&] { statstok::write_matrix_csv(deref(series, "series").value, cstr(path, "path")); });
}

size_t stk_series_length(const stk_series* series) { return series ? series->value.length() : 0; }
size_t stk_series_dims(const stk_series* series) { return series ? series->value.dims() : 0; }
const double* stk_series_values(const stk_series* series) {
    return series ? series->value.values.values().data() : nullptr;
}
void stk_series_destroy(stk_series* series) { delete series; }

stk_status stk_dataset_read(const char* path, stk_format format, stk_dataset** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        const std::string p = cstr(path, "path");
        statstok::Dataset ds;
        switch (format) {
        case STK_FORMAT_CSV:
            ds.name = p;
            ds.series.push_back(statstok::parse_matrix_csv(p));
            break;
        case STK_FORMAT_ROWS: {
            const std::string text = statstok::read_text_file(p);
            ds = statstok::parse_labeled_rows_text(text, statstok::detect_delimiter(text), p);
            break;
        }
        case STK_FORMAT_MANIFEST:
            ds = statstok::read_manifest(p);
            break;
        default:
            throw statstok::Error(statstok::ErrorCode::InvalidInput, "unknown dataset format");
        }
        *out = new stk_dataset{std::move(ds)};
    });
}

size_t stk_dataset_size(const stk_dataset* dataset) { return dataset ? dataset->value.series.size() : 0; }

stk_status stk_dataset_get(const stk_dataset* dataset, size_t index, stk_series** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        const auto& series = deref(dataset, "dataset").value.series;
        if (index >= series.size()) {
            throw statstok::Error(statstok::ErrorCode::InvalidInput, "dataset index out of range");
        }
        *out = new stk_series{series[index]};
    });
}

void stk_dataset_destroy(stk_dataset* dataset) { delete dataset; }

stk_status stk_regime_spec_parse(const char* text, stk_regime_spec** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = new stk_regime_spec{statstok::parse_regime_spec(cstr(text, "text"))};
    });
}

stk_status stk_regime_spec_read(const char* path, stk_regime_spec** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = new stk_regime_spec{statstok::read_regime_spec(cstr(path, "path"))};
    });
}

void stk_regime_spec_destroy(stk_regime_spec* spec) { delete spec; }

stk_status stk_generate(const stk_regime_spec* spec, uint64_t seed, stk_series** series,
                        char** truth_json) {
    return guarded([&] {
        deref(series, "series") = nullptr;
        if (truth_json) *truth_json = nullptr;
        auto generated = statstok::generate_piecewise_gaussian(deref(spec, "spec").value, seed);
        if (truth_json) {
            *truth_json = copy_string(
                statstok::splits_to_json(generated.true_splits, generated.series.length()));
        }
        *series = new stk_series{std::move(generated.series)};
    });
}

stk_status stk_add_noise(const stk_series* series, double sigma, uint64_t seed, stk_series** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = new stk_series{statstok::add_gaussian_noise(deref(series, "series").value, sigma, seed)};
    });
}

stk_status stk_detect(const stk_series* series, const stk_config* cfg, unsigned threads,
                      stk_detection** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        const auto& s = deref(series, "series").value;
        auto detection = statstok::detect(statstok::znormalize(s), to_cpp(deref(cfg, "cfg")), threads);
        *out = new stk_detection{std::move(detection), s.id};
    });
}

size_t stk_detection_split_count(const stk_detection* det) {
    return det ? det->value.segmentation.splits().size() : 0;
}

const size_t* stk_detection_splits(const stk_detection* det) {
    return det ? det->value.segmentation.splits().data() : nullptr;
}

stk_status stk_detection_to_json(const stk_detection* det, char** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        const auto& d = deref(det, "detection");
        *out = copy_string(statstok::detection_to_json(d.value, d.id));
    });
}

stk_status stk_detection_scores_csv(const stk_detection* det, char** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = copy_string(statstok::scores_csv(deref(det, "detection").value));
    });
}

void stk_detection_destroy(stk_detection* det) { delete det; }

stk_status stk_summarize(const stk_series* series, const stk_config* cfg, const stk_options* opts,
                         stk_result** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = new stk_result{statstok::stats_summarize(deref(series, "series").value,
                                                        to_cpp(deref(cfg, "cfg")),
                                                        to_cpp(deref(opts, "opts")))};
    });
}

stk_status stk_result_to_json(const stk_result* result, char** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = copy_string(statstok::result_to_json(deref(result, "result").value));
    });
}

stk_status stk_result_from_json(const char* json, stk_result** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = new stk_result{statstok::result_from_json(cstr(json, "json"))};
    });
}

size_t stk_result_token_count(const stk_result* result) {
    return result ? result->value.summary.token_count() : 0;
}
size_t stk_result_dims(const stk_result* result) { return result ? result->value.summary.tokens.cols() : 0; }
const double* stk_result_tokens(const stk_result* result) {
    return result ? result->value.summary.tokens.values().data() : nullptr;
}
double stk_result_compression_ratio(const stk_result* result) {
    return result ? result->value.compression_ratio : 0.0;
}
size_t stk_result_split_count(const stk_result* result) {
    return result ? result->value.segmentation.splits().size() : 0;
}
const size_t* stk_result_splits(const stk_result* result) {
    return result ? result->value.segmentation.splits().data() : nullptr;
}
void stk_result_destroy(stk_result* result) { delete result; }

stk_status stk_splits_from_json(const char* json, size_t** splits, size_t* count) {
    return guarded([&] {
        deref(splits, "splits") = nullptr;
        deref(count, "count") = 0;
        const auto values = statstok::splits_from_json(cstr(json, "json"));
        auto* buf = static_cast<size_t*>(std::malloc(sizeof(size_t) * (values.empty() ? 1 : values.size())));
        if (buf == nullptr) throw std::bad_alloc();
        std::copy(values.begin(), values.end(), buf);
        *splits = buf;
        *count = values.size();
    });
}

void stk_splits_free(size_t* splits) { std::free(splits); }

stk_status stk_change_point_prf(const size_t* predicted, size_t n_predicted, const size_t* truth,
                                size_t n_truth, size_t tol, stk_prf* out) {
    return guarded([&] {
        if ((n_predicted && !predicted) || (n_truth && !truth)) {
            throw statstok::Error(statstok::ErrorCode::InvalidInput, "split array is null");
        }
        const std::vector<std::size_t> p(predicted, predicted + n_predicted);
        const std::vector<std::size_t> t(truth, truth + n_truth);
        const auto prf = statstok::change_point_prf(p, t, tol);
        deref(out, "out") = stk_prf{prf.precision, prf.recall, prf.f1, prf.tolerance};
    });
}

stk_status stk_prf_to_json(const stk_prf* prf, char** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        const auto& p = deref(prf, "prf");
        statstok::EvalReport report;
        report.change_point = statstok::PrfScore{p.precision, p.recall, p.f1, p.tolerance};
        *out = copy_string(statstok::eval_report_to_json(report));
    });
}

stk_status stk_dtw_distance(const double* a, size_t na, const double* b, size_t nb, size_t dims,
                            double* out) {
    return guarded([&] {
        if (!a || !b) throw statstok::Error(statstok::ErrorCode::InvalidInput, "sequence is null");
        deref(out, "out") = statstok::dtw_distance(statstok::MatrixView(a, na, dims),
                                                   statstok::MatrixView(b, nb, dims));
    });
}

stk_status stk_eval_knn(const stk_dataset* train, const stk_dataset* test, const stk_method* methods,
                        size_t n_methods, const stk_config* cfg, const stk_options* opts,
                        char** report_json) {
    return guarded([&] {
        deref(report_json, "report_json") = nullptr;
        const auto report = statstok::run_knn_experiment(
            deref(train, "train").value, deref(test, "test").value, to_cpp(methods, n_methods),
            to_cpp(deref(cfg, "cfg")), to_cpp(deref(opts, "opts")));
        *report_json = copy_string(statstok::eval_report_to_json(report));
    });
}

stk_status stk_eval_noise(const stk_dataset* train, const stk_dataset* test, const double* sigmas,
                          size_t n_sigmas, const stk_method* methods, size_t n_methods,
                          const stk_config* cfg, const stk_options* opts, char** report_json) {
    return guarded([&] {
        deref(report_json, "report_json") = nullptr;
        if (n_sigmas && !sigmas) throw statstok::Error(statstok::ErrorCode::InvalidInput, "sigmas is null");
        const auto report = statstok::run_noise_experiment(
            deref(train, "train").value, deref(test, "test").value,
            std::vector<double>(sigmas, sigmas + n_sigmas), to_cpp(methods, n_methods),
            to_cpp(deref(cfg, "cfg")), to_cpp(deref(opts, "opts")));
        *report_json = copy_string(statstok::eval_report_to_json(report));
    });
}

stk_status stk_read_text_file(const char* path, char** out) {
    return guarded([&] {
        deref(out, "out") = nullptr;
        *out = copy_string(statstok::read_text_file(cstr(path, "path")));
    });
}

stk_status stk_write_text_file(const char* path, const char* text) {
    return guarded([&] {
        statstok::write_text_file(cstr(path, "path"), cstr(text, "text"));
    });
}

} // extern "C"
