#pragma once

#include <string>
#include <vector>

#include "bandspec/errors.hpp"

namespace bandspec {

// Boundary interaction strength sigma(y) on [0,d]. Positive values are
// attractive (they lower the quadratic form), negative values repulsive.
// The same profile is applied on both Robin legs: on the y-axis it is
// evaluated at the y coordinate, on the x-axis at the x coordinate.
class SigmaProfile {
public:
    enum class Kind { Constant, PiecewiseConstant, SampledTable };

    static SigmaProfile constant(double value);
    // Breakpoints strictly increasing inside (0,d); values has one more
    // entry than breakpoints (value on each piece).
    static SigmaProfile piecewise_constant(std::vector<double> breakpoints,
                                           std::vector<double> values, double d);
    // Ordered samples (y_i, v_i) with y strictly increasing, spanning [0,d];
    // evaluation is linear interpolation.
    static SigmaProfile sampled(std::vector<double> ys, std::vector<double> values,
                                double d);

    Kind kind() const { return kind_; }
    bool is_zero() const;

    // Throws OutOfDomain for y outside [0,d] (Constant profiles only reject
    // negative y, they carry no upper bound of their own).
    double eval(double y) const;

    double sup_norm() const;

private:
    SigmaProfile() = default;
    Kind kind_ = Kind::Constant;
    double d_ = -1.0; // < 0 when unbounded (Constant)
    std::vector<double> ys_;
    std::vector<double> values_;
};

// Reads a two-column (y, sigma) whitespace-separated text file into a
// SampledTable on [0,d]. Lines starting with '#' are ignored.
// Throws ParseError, NonMonotoneSamples, RangeMismatch.
SigmaProfile load_profile(const std::string& path, double d);

} // namespace bandspec
