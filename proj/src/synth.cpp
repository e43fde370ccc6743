#include "statstok/synth.hpp"

#include "statstok/error.hpp"
#include "text.hpp"

#include <cmath>
#include <random>
#include <string>

namespace statstok {

std::size_t RegimeSpec::total_length() const noexcept {
    std::size_t total = 0;
    for (const auto& r : regimes) total += r.length;
    return total;
}

void validate(const RegimeSpec& spec) {
    if (spec.regimes.empty()) throw Error(ErrorCode::InvalidInput, "regime spec has no regimes");
    if (spec.dims < 1) throw Error(ErrorCode::InvalidInput, "regime spec dimensionality must be >= 1");
    for (std::size_t i = 0; i < spec.regimes.size(); ++i) {
        const Regime& r = spec.regimes[i];
        const std::string where = "regime " + std::to_string(i) + ": ";
        if (r.length < 1) throw Error(ErrorCode::InvalidInput, where + "length must be >= 1");
        if (r.mean.size() != spec.dims || r.stdev.size() != spec.dims) {
            throw Error(ErrorCode::InvalidInput, where + "mean/stdev must have d entries");
        }
        for (std::size_t c = 0; c < spec.dims; ++c) {
            if (!std::isfinite(r.mean[c])) throw Error(ErrorCode::InvalidInput, where + "non-finite mean");
            if (!(r.stdev[c] >= 0.0) || !std::isfinite(r.stdev[c])) {
                throw Error(ErrorCode::InvalidInput, where + "stdev must be finite and >= 0");
            }
        }
    }
}

GeneratedSeries generate_piecewise_gaussian(const RegimeSpec& spec, std::uint64_t seed) {
    validate(spec);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    GeneratedSeries out;
    out.series.id = "synthetic:" + std::to_string(seed);
    out.series.values = Matrix(spec.total_length(), spec.dims);
    std::size_t t = 0;
    for (const Regime& r : spec.regimes) {
        if (t > 0) out.true_splits.push_back(t);
        for (std::size_t i = 0; i < r.length; ++i, ++t) {
            for (std::size_t c = 0; c < spec.dims; ++c) {
                out.series.values(t, c) = r.mean[c] + r.stdev[c] * normal(rng);
            }
        }
    }
    return out;
}

TimeSeries add_gaussian_noise(const TimeSeries& series, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidInput, "noise sigma must be finite and >= 0");
    }
    TimeSeries out = series;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : out.values.values()) v += normal(rng);
    return out;
}

namespace {

std::vector<double> parse_vector(std::string_view field, std::size_t line_no) {
    std::vector<double> out;
    for (auto token : detail::split(field, ',')) {
        const auto v = detail::parse_double(token);
        if (!v) {
            throw Error(ErrorCode::ParseError, "regime spec line " + std::to_string(line_no) +
                                                   ": bad number '" + std::string(detail::trim(token)) + "'");
        }
        out.push_back(*v);
    }
    return out;
}

} // namespace

RegimeSpec parse_regime_spec(std::string_view text) {
    RegimeSpec spec;
    bool dims_given = false;
    struct RawRegime {
        std::size_t length;
        std::vector<double> mean, stdev;
        std::size_t line;
    };
    std::vector<RawRegime> raw;

    std::size_t line_no = 0;
    for (auto line : detail::split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ParseError, "regime spec line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key == "d") {
            const auto d = detail::parse_unsigned(value);
            if (!d || *d < 1) {
                throw Error(ErrorCode::ParseError, "regime spec line " + std::to_string(line_no) + ": bad d");
            }
            spec.dims = static_cast<std::size_t>(*d);
            dims_given = true;
        } else if (key == "regime") {
            const auto fields = detail::split(value, ':');
            if (fields.size() != 3) {
                throw Error(ErrorCode::ParseError, "regime spec line " + std::to_string(line_no) +
                                                       ": expected length : mean : stdev");
            }
            const auto length = detail::parse_unsigned(fields[0]);
            if (!length) {
                throw Error(ErrorCode::ParseError, "regime spec line " + std::to_string(line_no) + ": bad length");
            }
            raw.push_back({static_cast<std::size_t>(*length), parse_vector(fields[1], line_no),
                           parse_vector(fields[2], line_no), line_no});
        } else {
            throw Error(ErrorCode::ParseError, "regime spec line " + std::to_string(line_no) +
                                                   ": unknown key '" + std::string(key) + "'");
        }
    }
    if (!dims_given && !raw.empty()) spec.dims = raw.front().mean.size();
    // Single values broadcast across channels.
    for (auto& r : raw) {
        if (r.mean.size() == 1) r.mean.assign(spec.dims, r.mean.front());
        if (r.stdev.size() == 1) r.stdev.assign(spec.dims, r.stdev.front());
        spec.regimes.push_back({r.length, std::move(r.mean), std::move(r.stdev)});
    }
    validate(spec);
    return spec;
}

RegimeSpec read_regime_spec(const std::filesystem::path& path) {
    return parse_regime_spec(detail::read_file(path.string()));
}

} // namespace statstok
