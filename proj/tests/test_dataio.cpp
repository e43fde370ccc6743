#include "corpus.hpp"

#include "statstok/dataio.hpp"
#include "statstok/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace statstok;
namespace fs = std::filesystem;

namespace {

template <class F>
Error error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error thrown";
    return Error(ErrorCode::InvalidInput, "");
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("statstok_dataio_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST(Znormalize, ZeroMeanUnitVariance) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(4.0, 3.0);
    TimeSeries s;
    s.values = Matrix(200, 3);
    for (auto& v : s.values.values()) v = n(rng);
    const auto z = znormalize(s);
    for (std::size_t c = 0; c < 3; ++c) {
        double sum = 0.0, sq = 0.0;
        for (std::size_t t = 0; t < 200; ++t) sum += z.values(t, c);
        const double m = sum / 200.0;
        for (std::size_t t = 0; t < 200; ++t) sq += (z.values(t, c) - m) * (z.values(t, c) - m);
        EXPECT_LT(std::fabs(m), 1e-12);
        EXPECT_NEAR(sq / 200.0, 1.0, 1e-9);
    }
}

TEST(Znormalize, TwoPointsAndConstant) {
    TimeSeries s;
    s.values = Matrix::from_rows({{0.0, 7.0}, {2.0, 7.0}});
    const auto z = znormalize(s);
    EXPECT_EQ(z.values, Matrix::from_rows({{-1.0, 0.0}, {1.0, 0.0}}));
}

TEST(LabeledRows, SingleLine) {
    const auto ds = parse_labeled_rows_text("1,0.5,0.7\n", Delimiter::Comma, "demo");
    ASSERT_EQ(ds.series.size(), 1u);
    EXPECT_EQ(ds.series[0].length(), 2u);
    EXPECT_EQ(ds.series[0].label, "1");
    EXPECT_EQ(ds.series[0].id, "demo:1");
}

TEST(LabeledRows, RaggedAndTabs) {
    const auto text = "a\t1\t2\t3\n\nb\t4\t5\n";
    EXPECT_EQ(detect_delimiter(text), Delimiter::Tab);
    const auto ds = parse_labeled_rows_text(text, Delimiter::Tab, "x");
    ASSERT_EQ(ds.series.size(), 2u);
    EXPECT_EQ(ds.series[0].length(), 3u);
    EXPECT_EQ(ds.series[1].length(), 2u);
    EXPECT_EQ(ds.series[1].id, "x:3");
}

TEST(LabeledRows, BadTokenCitesLine) {
    const auto e = error_of([] { parse_labeled_rows_text("1,2,3\n2,4,5\n1,oops,6\n", Delimiter::Comma, "f"); });
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
}

TEST(LabeledRows, EmptyFile) {
    EXPECT_EQ(error_of([] { parse_labeled_rows_text("\n\n", Delimiter::Comma, "f"); }).code(),
              ErrorCode::EmptyDataset);
}

TEST(MatrixCsv, ShapeAndHeader) {
    const auto a = parse_matrix_csv_text("1,2\n3,4\n5,6\n", "a");
    EXPECT_EQ(a.length(), 3u);
    EXPECT_EQ(a.dims(), 2u);
    const auto b = parse_matrix_csv_text("x,y\n1,2\n3,4\n5,6\n", "b");
    EXPECT_EQ(b.values, a.values);
}

TEST(MatrixCsv, RaggedRow) {
    const auto e = error_of([] { parse_matrix_csv_text("1,2\n3\n", "r"); });
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
}

TEST(MatrixCsv, RoundTripIsExact) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1e3);
    TimeSeries s;
    s.id = "rt";
    s.values = Matrix(40, 3);
    for (auto& v : s.values.values()) v = n(rng);
    EXPECT_EQ(parse_matrix_csv_text(matrix_csv(s), "rt").values, s.values);
}

TEST(Manifest, ResolvesRelativePaths) {
    const auto dir = scratch_dir("manifest");
    fs::create_directories(dir / "data");
    write_text_file(dir / "data" / "a.csv", "1\n2\n3\n");
    write_text_file(dir / "data" / "b.csv", "v\n4\n5\n");
    write_text_file(dir / "list.csv", "data/a.csv,up\ndata/b.csv,down\n");
    const auto ds = read_manifest(dir / "list.csv");
    ASSERT_EQ(ds.series.size(), 2u);
    EXPECT_EQ(ds.series[0].label, "up");
    EXPECT_EQ(ds.series[1].length(), 2u);
}

TEST(Manifest, MissingFileIsIoError) {
    const auto dir = scratch_dir("missing");
    write_text_file(dir / "list.csv", "nope.csv,a\n");
    EXPECT_EQ(error_of([&] { read_manifest(dir / "list.csv"); }).code(), ErrorCode::IoError);
}

TEST(ResultJson, TrivialRoundTrip) {
    TimeSeries s;
    s.id = "one";
    s.values = Matrix(30, 1, 2.0);
    const auto r = stats_summarize(s, TokenizerConfig{});
    EXPECT_EQ(result_from_json(result_to_json(r)), r);
}

TEST(ResultJson, RandomizedRoundTrip) {
    for (auto method : {SummaryMethod::Mean, SummaryMethod::Gmm, SummaryMethod::Uniform}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto g = testing_corpus::regime_series(seed, 420);
            TokenizerConfig cfg;
            cfg.alpha = 1.5 + 0.1 * double(seed);
            SummaryOptions opts;
            opts.method = method;
            opts.seed = seed;
            const auto r = stats_summarize(g.series, cfg, opts);
            const auto text = result_to_json(r);
            const auto back = result_from_json(text);
            EXPECT_EQ(back, r);
            EXPECT_EQ(result_to_json(back), text);
        }
    }
}

TEST(ResultJson, MissingSplitsIsSchemaError) {
    TimeSeries s;
    s.values = Matrix(30, 1, 2.0);
    auto text = result_to_json(stats_summarize(s, TokenizerConfig{}));
    const auto at = text.find("\"splits\"");
    ASSERT_NE(at, std::string::npos);
    text.replace(at, 8, "\"splots\"");
    const auto e = error_of([&] { result_from_json(text); });
    EXPECT_EQ(e.code(), ErrorCode::SchemaError);
    EXPECT_NE(std::string(e.what()).find("splits"), std::string::npos);
}

TEST(ResultJson, MalformedIsParseError) {
    EXPECT_EQ(error_of([] { result_from_json("{\"id\": "); }).code(), ErrorCode::ParseError);
}

TEST(SplitsJson, RoundTrip) {
    const std::vector<std::size_t> splits{12, 40, 99};
    EXPECT_EQ(splits_from_json(splits_to_json(splits, 120)), splits);
    EXPECT_EQ(error_of([] { splits_from_json("{\"length\": 3}"); }).code(), ErrorCode::SchemaError);
}

TEST(Files, MissingFileIsIoError) {
    EXPECT_EQ(error_of([] { read_text_file("/nonexistent/statstok/file"); }).code(), ErrorCode::IoError);
}
