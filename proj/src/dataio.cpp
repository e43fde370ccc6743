#include "statstok/dataio.hpp"

#include "json_util.hpp"
#include "statstok/error.hpp"
#include "text.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace statstok {

using detail::Json;

void validate(const TimeSeries& series) {
    if (series.length() < 1) throw Error(ErrorCode::InvalidInput, "series '" + series.id + "' is empty");
    if (series.dims() < 1) throw Error(ErrorCode::InvalidInput, "series '" + series.id + "' has no channels");
    for (double v : series.values.values()) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidInput, "series '" + series.id + "' contains a non-finite value");
        }
    }
}

TimeSeries znormalize(const TimeSeries& series) {
    validate(series);
    TimeSeries out = series;
    const std::size_t rows = series.length();
    const double n = static_cast<double>(rows);
    for (std::size_t c = 0; c < series.dims(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < rows; ++r) mean += series.values(r, c);
        mean /= n;
        double var = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double diff = series.values(r, c) - mean;
            var += diff * diff;
        }
        const double sd = std::sqrt(var / n);
        for (std::size_t r = 0; r < rows; ++r) {
            out.values(r, c) = sd < 1e-12 ? 0.0 : (series.values(r, c) - mean) / sd;
        }
    }
    return out;
}

namespace detail {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace detail

std::string read_text_file(const std::filesystem::path& path) {
    return detail::read_file(path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

Delimiter detect_delimiter(std::string_view text) {
    for (auto line : detail::split(text, '\n')) {
        if (detail::trim(line).empty()) continue;
        return line.find('\t') != std::string_view::npos ? Delimiter::Tab : Delimiter::Comma;
    }
    return Delimiter::Comma;
}

Dataset parse_labeled_rows_text(std::string_view text, Delimiter delim, const std::string& name) {
    const char sep = delim == Delimiter::Tab ? '\t' : ',';
    Dataset ds;
    ds.name = name;
    std::size_t line_no = 0;
    for (auto line : detail::split(text, '\n')) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(detail::trim(line), sep);
        if (fields.size() < 2) {
            throw Error(ErrorCode::ParseError,
                        name + ": line " + std::to_string(line_no) + ": expected a label and at least one value");
        }
        TimeSeries s;
        s.id = name + ":" + std::to_string(line_no);
        s.label = std::string(detail::trim(fields[0]));
        s.values = Matrix(fields.size() - 1, 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto v = detail::parse_double(fields[i]);
            if (!v || !std::isfinite(*v)) {
                throw Error(ErrorCode::ParseError, name + ": line " + std::to_string(line_no) +
                                                       ": non-numeric value '" +
                                                       std::string(detail::trim(fields[i])) + "'");
            }
            s.values(i - 1, 0) = *v;
        }
        ds.series.push_back(std::move(s));
    }
    if (ds.series.empty()) throw Error(ErrorCode::EmptyDataset, name + ": no series");
    return ds;
}

Dataset parse_labeled_rows(const std::filesystem::path& path, Delimiter delim) {
    return parse_labeled_rows_text(read_text_file(path), delim, path.string());
}

TimeSeries parse_matrix_csv_text(std::string_view text, const std::string& id) {
    TimeSeries s;
    s.id = id;
    std::size_t line_no = 0;
    bool first_row = true;
    std::size_t cols = 0;
    std::vector<double> values;
    std::size_t rows = 0;
    for (auto line : detail::split(text, '\n')) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(detail::trim(line), ',');
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        std::string_view bad;
        for (auto f : fields) {
            const auto v = detail::parse_double(f);
            if (!v || !std::isfinite(*v)) {
                numeric = false;
                bad = detail::trim(f);
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (first_row) {
                first_row = false; // header
                continue;
            }
            throw Error(ErrorCode::ParseError, id + ": row " + std::to_string(line_no) +
                                                   ": non-numeric value '" + std::string(bad) + "'");
        }
        if (rows == 0) {
            cols = row.size();
        } else if (row.size() != cols) {
            throw Error(ErrorCode::ParseError, id + ": row " + std::to_string(line_no) + " has " +
                                                   std::to_string(row.size()) + " columns, expected " +
                                                   std::to_string(cols));
        }
        first_row = false;
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) throw Error(ErrorCode::EmptyDataset, id + ": no data rows");
    s.values = Matrix(rows, cols, std::move(values));
    return s;
}

TimeSeries parse_matrix_csv(const std::filesystem::path& path) {
    return parse_matrix_csv_text(read_text_file(path), path.string());
}

Dataset read_manifest(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    Dataset ds;
    ds.name = path.string();
    const auto base = path.parent_path();
    std::size_t line_no = 0;
    for (auto line : detail::split(text, '\n')) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.rfind(',');
        const auto file = detail::trim(line.substr(0, comma));
        if (file.empty()) {
            throw Error(ErrorCode::ParseError, ds.name + ": line " + std::to_string(line_no) + ": empty path");
        }
        std::filesystem::path p{std::string(file)};
        if (p.is_relative()) p = base / p;
        TimeSeries s = parse_matrix_csv(p);
        s.id = std::string(file);
        if (comma != std::string_view::npos) s.label = std::string(detail::trim(line.substr(comma + 1)));
        if (!ds.series.empty() && ds.series.front().dims() != s.dims()) {
            throw Error(ErrorCode::ParseError, ds.name + ": line " + std::to_string(line_no) +
                                                   ": dimensionality differs from earlier series");
        }
        ds.series.push_back(std::move(s));
    }
    if (ds.series.empty()) throw Error(ErrorCode::EmptyDataset, ds.name + ": manifest lists no series");
    return ds;
}

std::string matrix_csv(const TimeSeries& series) {
    std::string out;
    for (std::size_t r = 0; r < series.length(); ++r) {
        const auto row = series.values.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += detail::format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_matrix_csv(const TimeSeries& series, const std::filesystem::path& path) {
    write_text_file(path, matrix_csv(series));
}

namespace {

Json config_json(const TokenizerConfig& cfg) {
    Json j = Json::object();
    j["delta_min"] = cfg.delta_min;
    j["delta_max"] = cfg.delta_max;
    j["delta_step"] = cfg.delta_step;
    j["stride"] = cfg.stride;
    j["alpha"] = cfg.alpha;
    j["s_min"] = cfg.s_min;
    j["epsilon"] = cfg.epsilon;
    j["lambda"] = cfg.lambda;
    return j;
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (double v : m.row(r)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename T>
T get_as(const Json& object, const char* name) {
    const Json& v = detail::require(object, name);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::SchemaError, std::string("field '") + name + "' has the wrong type");
    }
}

double get_double(const Json& object, const char* name) {
    const Json& v = detail::require(object, name);
    if (!v.is_number()) {
        throw Error(ErrorCode::SchemaError, std::string("field '") + name + "' must be a number");
    }
    return v.get<double>();
}

Matrix matrix_from_json(const Json& object, const char* name) {
    const Json& rows = detail::require(object, name);
    if (!rows.is_array()) throw Error(ErrorCode::SchemaError, std::string("field '") + name + "' must be an array");
    Matrix m;
    for (const Json& row : rows) {
        if (!row.is_array() || row.empty()) {
            throw Error(ErrorCode::SchemaError, std::string("field '") + name + "' must hold non-empty rows");
        }
        std::vector<double> values;
        for (const Json& v : row) {
            if (!v.is_number()) throw Error(ErrorCode::SchemaError, std::string("field '") + name + "' holds a non-number");
            values.push_back(v.get<double>());
        }
        if (!m.empty() && values.size() != m.cols()) {
            throw Error(ErrorCode::SchemaError, std::string("field '") + name + "' is ragged");
        }
        m.append_row(values);
    }
    return m;
}

Json parse_document(std::string_view json) {
    try {
        return Json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
    }
}

Json scale_stats_json(const std::vector<ScaleStats>& stats) {
    Json out = Json::array();
    for (const auto& s : stats) {
        Json e = Json::object();
        e["scale"] = s.scale;
        e["mu"] = s.mu;
        e["sigma"] = s.sigma;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

std::string result_to_json(const StatsResult& r) {
    Json j = Json::object();
    j["id"] = r.input_id;
    j["method"] = std::string(to_string(r.summary.method));
    j["config"] = config_json(r.config);
    j["splits"] = r.segmentation.splits();
    j["tokens"] = matrix_json(r.summary.tokens);
    Json prov = Json::array();
    for (const auto& s : r.summary.provenance) prov.push_back(Json::array({s.begin, s.end}));
    j["provenance"] = std::move(prov);
    if (r.summary.token_variances) j["token_variances"] = matrix_json(*r.summary.token_variances);
    j["compression_ratio"] = r.compression_ratio;
    j["scale_stats"] = scale_stats_json(r.scale_stats);
    return detail::dump_json(j) + "\n";
}

StatsResult result_from_json(std::string_view json) {
    const Json j = parse_document(json);
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "result document must be an object");

    StatsResult r;
    r.input_id = get_as<std::string>(j, "id");
    r.summary.method = [&] {
        try {
            return parse_summary_method(get_as<std::string>(j, "method"));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SchemaError) throw;
            throw Error(ErrorCode::SchemaError, std::string("field 'method': ") + e.what());
        }
    }();

    const Json& cfg = detail::require(j, "config");
    r.config.delta_min = get_as<std::size_t>(cfg, "delta_min");
    r.config.delta_max = get_as<std::size_t>(cfg, "delta_max");
    r.config.delta_step = get_as<std::size_t>(cfg, "delta_step");
    r.config.stride = get_as<std::size_t>(cfg, "stride");
    r.config.alpha = get_double(cfg, "alpha");
    r.config.s_min = get_as<std::size_t>(cfg, "s_min");
    r.config.epsilon = get_double(cfg, "epsilon");
    r.config.lambda = get_double(cfg, "lambda");

    const auto splits = get_as<std::vector<std::size_t>>(j, "splits");
    r.summary.tokens = matrix_from_json(j, "tokens");

    const Json& prov = detail::require(j, "provenance");
    if (!prov.is_array()) throw Error(ErrorCode::SchemaError, "field 'provenance' must be an array");
    for (const Json& p : prov) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
            throw Error(ErrorCode::SchemaError, "field 'provenance' must hold [start, end] pairs");
        }
        r.summary.provenance.push_back({p[0].get<std::size_t>(), p[1].get<std::size_t>()});
    }
    if (r.summary.provenance.size() != r.summary.tokens.rows() || r.summary.provenance.empty()) {
        throw Error(ErrorCode::SchemaError, "field 'provenance' must have one entry per token");
    }
    if (j.contains("token_variances")) r.summary.token_variances = matrix_from_json(j, "token_variances");

    r.compression_ratio = get_double(j, "compression_ratio");

    const Json& stats = detail::require(j, "scale_stats");
    if (!stats.is_array()) throw Error(ErrorCode::SchemaError, "field 'scale_stats' must be an array");
    for (const Json& s : stats) {
        r.scale_stats.push_back({get_as<std::size_t>(s, "scale"), get_double(s, "mu"), get_double(s, "sigma")});
    }

    std::size_t length = 0;
    for (const auto& p : r.summary.provenance) length = std::max(length, p.end);
    try {
        r.segmentation = Segmentation(length, splits);
    } catch (const Error& e) {
        throw Error(ErrorCode::SchemaError, std::string("field 'splits': ") + e.what());
    }
    return r;
}

void write_result(const StatsResult& result, const std::filesystem::path& path) {
    write_text_file(path, result_to_json(result));
}

StatsResult read_result(const std::filesystem::path& path) {
    return result_from_json(read_text_file(path));
}

std::string splits_to_json(const std::vector<std::size_t>& splits, std::size_t length) {
    Json j = Json::object();
    j["length"] = length;
    j["splits"] = splits;
    return detail::dump_json(j) + "\n";
}

std::string detection_to_json(const Detection& detection, const std::string& id) {
    Json j = Json::object();
    j["id"] = id;
    j["length"] = detection.segmentation.length();
    j["splits"] = detection.segmentation.splits();
    j["scale_stats"] = scale_stats_json(detection.scale_stats);
    return detail::dump_json(j) + "\n";
}

std::string scores_csv(const Detection& detection) {
    std::string out = "position,score,scale\n";
    for (const auto& c : detection.scores) {
        out += std::to_string(c.position);
        out += ',';
        out += detail::format_double(c.score);
        out += ',';
        out += std::to_string(c.scale);
        out += '\n';
    }
    return out;
}

std::vector<std::size_t> splits_from_json(std::string_view json) {
    const Json j = parse_document(json);
    return get_as<std::vector<std::size_t>>(j, "splits");
}

} // namespace statstok
