#pragma once

#include "statstok/pipeline.hpp"
#include "statstok/time_series.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace statstok {

/// Per channel: subtract the mean and divide by the population stdev.
/// Channels with stdev < 1e-12 become all zeros.
TimeSeries znormalize(const TimeSeries& series);

enum class Delimiter { Tab, Comma };

/// Guesses the delimiter from the first non-blank line (tab wins if present).
Delimiter detect_delimiter(std::string_view text);

/// One univariate series per line: `label<delim>v1<delim>v2...`.
/// Ids are "<name>:<line>". Blank lines are skipped.
Dataset parse_labeled_rows_text(std::string_view text, Delimiter delim, const std::string& name);
Dataset parse_labeled_rows(const std::filesystem::path& path, Delimiter delim);

/// Rows are timesteps, columns channels; a non-numeric first row is a header.
TimeSeries parse_matrix_csv_text(std::string_view text, const std::string& id);
TimeSeries parse_matrix_csv(const std::filesystem::path& path);

/// `path,label` per line; relative paths resolve against the manifest's
/// directory. Each path is a matrix CSV.
Dataset read_manifest(const std::filesystem::path& path);

void write_matrix_csv(const TimeSeries& series, const std::filesystem::path& path);
std::string matrix_csv(const TimeSeries& series);

/// JSON document with fields id, method, config, splits, tokens, provenance,
/// compression_ratio, scale_stats (and token_variances for gmm). Doubles are
/// written with 17 significant digits.
std::string result_to_json(const StatsResult& result);
/// Throws SchemaError naming the first missing or mistyped field.
StatsResult result_from_json(std::string_view json);

void write_result(const StatsResult& result, const std::filesystem::path& path);
StatsResult read_result(const std::filesystem::path& path);

/// `{"splits": [...]}` documents; reading accepts any object with a
/// `splits` array (a detection or result document works too).
std::string splits_to_json(const std::vector<std::size_t>& splits, std::size_t length);
std::vector<std::size_t> splits_from_json(std::string_view json);

/// {"id", "length", "splits", "scale_stats"} document for a detection run.
std::string detection_to_json(const Detection& detection, const std::string& id);
/// Tidy `position,score,scale` CSV of every scored position.
std::string scores_csv(const Detection& detection);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

} // namespace statstok
