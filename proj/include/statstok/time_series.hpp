#pragma once

#include "statstok/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace statstok {

/// A T x d real-valued series; rows are timesteps, columns are channels.
struct TimeSeries {
    std::string id;
    Matrix values;
    std::optional<std::string> label;

    std::size_t length() const noexcept { return values.rows(); }
    std::size_t dims() const noexcept { return values.cols(); }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

/// Throws InvalidInput unless T >= 1, d >= 1 and every value is finite.
void validate(const TimeSeries& series);

struct Dataset {
    std::string name;
    std::vector<TimeSeries> series;
};

} // namespace statstok
