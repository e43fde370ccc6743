#pragma once

// Seeded synthetic corpora shared by the pipeline tests and the acceptance
// runner.

#include "statstok/synth.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testing_corpus {

/// Four regimes of unit-variance noise. Every regime is at least
/// `min_regime` long and each boundary shifts every channel by 3..5 noise
/// standard deviations in a random direction. Odd seeds are 3-channel,
/// even seeds univariate.
inline statstok::GeneratedSeries regime_series(std::uint64_t seed, std::size_t length,
                                               std::size_t regimes = 4,
                                               std::size_t min_regime = 100) {
    std::mt19937_64 rng(1000 + seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t d = seed % 2 == 0 ? 1 : 3;

    std::vector<double> weights(regimes);
    double total = 0.0;
    for (auto& w : weights) total += (w = unit(rng));
    const std::size_t spare = length - regimes * min_regime;
    std::vector<std::size_t> lengths(regimes);
    std::size_t used = 0;
    for (std::size_t r = 0; r + 1 < regimes; ++r) {
        lengths[r] = min_regime + static_cast<std::size_t>(weights[r] / total * spare);
        used += lengths[r];
    }
    lengths.back() = length - used;

    statstok::RegimeSpec spec;
    spec.dims = d;
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < regimes; ++r) {
        if (r > 0)
            for (auto& m : mean) {
                const double shift = 3.0 + 2.0 * unit(rng);
                m += unit(rng) < 0.5 ? -shift : shift;
            }
        spec.regimes.push_back({lengths[r], mean, std::vector<double>(d, 1.0)});
    }
    return statstok::generate_piecewise_gaussian(spec, seed);
}

/// Two-class univariate set: class A steps 0 -> +5, class B steps 0 -> -5,
/// with the step position jittered around the middle.
inline statstok::Dataset two_class(std::uint64_t seed, std::size_t per_class, std::size_t length,
                                   const std::string& name) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> jitter(0, length / 5);
    statstok::Dataset ds;
    ds.name = name;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const bool a = i % 2 == 0;
        const std::size_t first = 2 * length / 5 + jitter(rng);
        statstok::RegimeSpec spec;
        spec.dims = 1;
        spec.regimes.push_back({first, {0.0}, {1.0}});
        spec.regimes.push_back({length - first, {a ? 5.0 : -5.0}, {1.0}});
        auto g = statstok::generate_piecewise_gaussian(spec, rng());
        g.series.id = name + ":" + std::to_string(i);
        g.series.label = a ? "A" : "B";
        ds.series.push_back(std::move(g.series));
    }
    return ds;
}

} // namespace testing_corpus
