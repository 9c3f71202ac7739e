#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "felab/models/mixture.hpp"

namespace felab::parisi {

// Piecewise-constant function on [0,1]: value values[l] on [t_{l-1}, t_l)
// with t_0 = 0 and t_k = 1, right-continuous, range in [0,1]. No
// monotonicity requirement; this is the internal solver input.
struct PiecewiseConstant {
    std::vector<double> breakpoints; // t_1 < ... < t_k = 1
    std::vector<double> values;      // one per interval

    PiecewiseConstant() : breakpoints{1.0}, values{0.0} {}
    PiecewiseConstant(std::vector<double> bps, std::vector<double> vals)
        : breakpoints(std::move(bps)), values(std::move(vals)) {
        if (breakpoints.empty() || breakpoints.size() != values.size())
            throw std::invalid_argument("PiecewiseConstant: size mismatch");
        double prev = 0.0;
        for (double t : breakpoints) {
            if (!(t > prev)) throw std::invalid_argument("PiecewiseConstant: breakpoints not increasing");
            prev = t;
        }
        if (std::abs(breakpoints.back() - 1.0) > 1e-14)
            throw std::invalid_argument("PiecewiseConstant: last breakpoint must be 1");
        breakpoints.back() = 1.0;
        for (double v : values)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("PiecewiseConstant: values outside [0,1]");
    }

    std::size_t intervals() const { return values.size(); }
    double left_endpoint(std::size_t l) const { return l == 0 ? 0.0 : breakpoints[l - 1]; }

    double operator()(double t) const {
        if (t >= 1.0) return values.back();
        for (std::size_t l = 0; l < breakpoints.size(); ++l)
            if (t < breakpoints[l]) return values[l];
        return values.back();
    }
};

// The order parameter: a nondecreasing right-continuous step function
// [0,1] -> [0,1] given by breakpoints and values.
struct StepZeta {
    std::vector<double> breakpoints;
    std::vector<double> values;

    static StepZeta constant(double m) { return StepZeta({1.0}, {m}); }

    StepZeta() : breakpoints{1.0}, values{0.0} {}
    StepZeta(std::vector<double> bps, std::vector<double> vals)
        : breakpoints(std::move(bps)), values(std::move(vals)) {
        PiecewiseConstant check(breakpoints, values); // shared structural checks
        for (std::size_t l = 1; l < this->values.size(); ++l)
            if (this->values[l] < this->values[l - 1])
                throw std::invalid_argument("StepZeta: values must be nondecreasing");
    }

    double operator()(double t) const { return profile()(t); }
    PiecewiseConstant profile() const { return PiecewiseConstant(breakpoints, values); }
};

// The combination rule zeta = (zeta1 xi1'' + zeta2 xi2'') / (xi1'' + xi2'').
// Generally not a step function, and not necessarily monotone even for
// monotone inputs when the weights xi'' cross; consumers step-approximate it
// on a dense grid. Where the denominator vanishes the right limit is used.
struct CombinedZeta {
    MixtureXi xi1, xi2;
    PiecewiseConstant z1, z2;

    double operator()(double t) const {
        double d1 = xi1.d2(t), d2 = xi2.d2(t);
        if (d1 + d2 <= 0.0) {
            // right limit: walk forward; the denominator is a polynomial with
            // nonnegative coefficients, so it is positive just right of t
            // unless it vanishes identically
            double step = 1e-9;
            double tt = t;
            for (int k = 0; k < 40 && d1 + d2 <= 0.0; ++k) {
                tt = std::min(1.0, t + step);
                d1 = xi1.d2(tt);
                d2 = xi2.d2(tt);
                step *= 4.0;
            }
            if (d1 + d2 <= 0.0)
                throw std::domain_error("CombinedZeta: xi1'' + xi2'' vanishes identically");
            return (z1(tt) * d1 + z2(tt) * d2) / (d1 + d2);
        }
        return (z1(t) * d1 + z2(t) * d2) / (d1 + d2);
    }

    // values at the union of the input breakpoints (plus 0)
    std::vector<std::pair<double, double>> sampled_at_breakpoints() const {
        std::vector<double> ts{0.0};
        for (double t : z1.breakpoints) ts.push_back(t);
        for (double t : z2.breakpoints) ts.push_back(t);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        std::vector<std::pair<double, double>> out;
        for (double t : ts) out.push_back({t, (*this)(t)});
        return out;
    }

    // dense step approximation: cell midpoint values on a uniform grid
    PiecewiseConstant to_profile(int cells = 64) const {
        if (cells < 1) throw std::invalid_argument("CombinedZeta::to_profile: cells < 1");
        std::vector<double> bps(cells), vals(cells);
        for (int c = 0; c < cells; ++c) {
            bps[c] = double(c + 1) / cells;
            double v = (*this)((c + 0.5) / cells);
            vals[c] = std::clamp(v, 0.0, 1.0);
        }
        bps.back() = 1.0;
        return PiecewiseConstant(std::move(bps), std::move(vals));
    }
};

inline CombinedZeta zeta_combine(const MixtureXi& xi1, const StepZeta& z1, const MixtureXi& xi2,
                                 const StepZeta& z2) {
    if (xi1.d2(1.0) + xi2.d2(1.0) <= 0.0)
        throw std::invalid_argument("zeta_combine: xi1'' + xi2'' identically zero");
    return CombinedZeta{xi1, xi2, z1.profile(), z2.profile()};
}

} // namespace felab::parisi
