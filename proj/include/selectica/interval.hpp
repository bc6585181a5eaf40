#pragma once

#include <cmath>
#include <optional>
#include <string>

namespace selectica {

// A confidence interval; the universal method output.
struct Interval {
    double lo;
    double hi;
    double level;        // nominal 1 - alpha
    std::string method;
    std::optional<double> midpoint_hint;

    double width() const { return hi - lo; }
    bool infinite() const { return std::isinf(lo) || std::isinf(hi); }
    bool contains(double t) const { return lo <= t && t <= hi; }
};

// Tuning of the widened-interval level adjustment.  The level constraint
// binds at the optimum, so eta is a function of nu.
struct IwTuning {
    double eta;
    double nu;
    double adjusted_level;
};

}  // namespace selectica
