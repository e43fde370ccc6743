#pragma once

#include "statstok/time_series.hpp"

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

namespace statstok {

struct Regime {
    std::size_t length = 0;
    std::vector<double> mean;  ///< length d
    std::vector<double> stdev; ///< length d, >= 0
};

/// Piecewise-stationary diagonal-Gaussian series description.
struct RegimeSpec {
    std::size_t dims = 1;
    std::vector<Regime> regimes;

    std::size_t total_length() const noexcept;
};

/// Throws InvalidInput on an empty regime list, zero lengths, negative
/// stdevs or vectors that do not match dims.
void validate(const RegimeSpec& spec);

struct GeneratedSeries {
    TimeSeries series;
    std::vector<std::size_t> true_splits; ///< interior regime boundaries
};

GeneratedSeries generate_piecewise_gaussian(const RegimeSpec& spec, std::uint64_t seed);

/// Adds i.i.d. N(0, sigma^2) to every value. sigma = 0 returns the input.
TimeSeries add_gaussian_noise(const TimeSeries& series, double sigma, std::uint64_t seed);

/// Line-based spec text:
///   d = 2
///   regime = 250 : 0, 0 : 1, 1
/// Each regime line is `length : mean... : stdev...`. '#' starts a comment.
RegimeSpec parse_regime_spec(std::string_view text);
RegimeSpec read_regime_spec(const std::filesystem::path& path);

} // namespace statstok
