#include "bandspec/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bandspec {

SigmaProfile SigmaProfile::constant(double value) {
    SigmaProfile p;
    p.kind_ = Kind::Constant;
    p.values_ = {value};
    return p;
}

SigmaProfile SigmaProfile::piecewise_constant(std::vector<double> breakpoints,
                                              std::vector<double> values,
                                              double d) {
    if (!(d > 0))
        throw RangeMismatch("piecewise profile needs d > 0");
    if (values.size() != breakpoints.size() + 1)
        throw ParseError("piecewise profile needs |values| = |breakpoints| + 1");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (breakpoints[i] <= 0 || breakpoints[i] >= d)
            throw RangeMismatch("breakpoints must lie strictly inside (0,d)");
        if (i > 0 && breakpoints[i] <= breakpoints[i - 1])
            throw NonMonotoneSamples("breakpoints must be strictly increasing");
    }
    SigmaProfile p;
    p.kind_ = Kind::PiecewiseConstant;
    p.d_ = d;
    p.ys_ = std::move(breakpoints);
    p.values_ = std::move(values);
    return p;
}

SigmaProfile SigmaProfile::sampled(std::vector<double> ys,
                                   std::vector<double> values, double d) {
    if (!(d > 0))
        throw RangeMismatch("sampled profile needs d > 0");
    if (ys.size() != values.size() || ys.size() < 2)
        throw ParseError("sampled profile needs >= 2 (y, value) pairs");
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (ys[i] <= ys[i - 1])
            throw NonMonotoneSamples("sample ordinates must be strictly increasing");
    double tol = 1e-9 * d;
    if (ys.front() > tol || ys.back() < d - tol)
        throw RangeMismatch("samples must span [0,d]");
    SigmaProfile p;
    p.kind_ = Kind::SampledTable;
    p.d_ = d;
    p.ys_ = std::move(ys);
    p.values_ = std::move(values);
    return p;
}

bool SigmaProfile::is_zero() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v == 0.0; });
}

double SigmaProfile::eval(double y) const {
    double tol = d_ > 0 ? 1e-9 * d_ : 0.0;
    if (y < -tol || (d_ > 0 && y > d_ + tol))
        throw OutOfDomain("sigma evaluated outside [0,d]");
    switch (kind_) {
    case Kind::Constant:
        return values_[0];
    case Kind::PiecewiseConstant: {
        auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
        return values_[static_cast<std::size_t>(it - ys_.begin())];
    }
    case Kind::SampledTable: {
        y = std::clamp(y, ys_.front(), ys_.back());
        auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
        if (it == ys_.begin()) return values_.front();
        if (it == ys_.end()) return values_.back();
        std::size_t hi = static_cast<std::size_t>(it - ys_.begin());
        double t = (y - ys_[hi - 1]) / (ys_[hi] - ys_[hi - 1]);
        return (1.0 - t) * values_[hi - 1] + t * values_[hi];
    }
    }
    return 0.0;
}

double SigmaProfile::sup_norm() const {
    double s = 0.0;
    for (double v : values_)
        s = std::max(s, std::abs(v));
    return s;
}

SigmaProfile load_profile(const std::string& path, double d) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open profile file: " + path);
    std::vector<double> ys, vals;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        double y, v;
        if (!(ls >> y)) continue; // blank / comment line
        if (!(ls >> v))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected two numeric columns");
        ys.push_back(y);
        vals.push_back(v);
    }
    if (ys.size() < 2)
        throw ParseError(path + ": need at least two samples");
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (ys[i] <= ys[i - 1])
            throw NonMonotoneSamples(path + ": y column must be strictly increasing");
    double tol = 1e-9 * d;
    if (ys.front() > tol || ys.back() < d - tol)
        throw RangeMismatch(path + ": samples must span [0,d]");
    return SigmaProfile::sampled(std::move(ys), std::move(vals), d);
}

} // namespace bandspec
