#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "felab/seeding.hpp"
#include "felab/stats.hpp"

namespace felab {

// Scalar increment distribution nu with finite exponential moments and a
// closed-form log-mgf.
struct IncrementLaw {
    enum class Kind { gaussian, bernoulli_pm, uniform, discrete };

    Kind kind = Kind::gaussian;
    double a = 0.0, b = 1.0;      // gaussian: mean,var; uniform: lo,hi; bernoulli_pm: a = P(+1)
    std::vector<double> atoms;    // discrete
    std::vector<double> weights;

    static IncrementLaw gaussian(double mean, double var) {
        if (var < 0) throw std::invalid_argument("gaussian: var < 0");
        return {Kind::gaussian, mean, var, {}, {}};
    }
    static IncrementLaw point_mass(double v) { return gaussian(v, 0.0); }
    static IncrementLaw bernoulli_pm(double p) {
        if (p < 0 || p > 1) throw std::invalid_argument("bernoulli_pm: p outside [0,1]");
        return {Kind::bernoulli_pm, p, 0.0, {}, {}};
    }
    static IncrementLaw uniform(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("uniform: need lo < hi");
        return {Kind::uniform, lo, hi, {}, {}};
    }
    static IncrementLaw discrete(std::vector<double> atoms, std::vector<double> weights) {
        if (atoms.empty() || atoms.size() != weights.size())
            throw std::invalid_argument("discrete: bad atoms/weights");
        double tot = 0.0;
        for (double w : weights) {
            if (w < 0) throw std::invalid_argument("discrete: negative weight");
            tot += w;
        }
        if (tot <= 0) throw std::invalid_argument("discrete: zero total weight");
        for (double& w : weights) w /= tot;
        return {Kind::discrete, 0.0, 0.0, std::move(atoms), std::move(weights)};
    }

    double sample(Rng& rng) const {
        switch (kind) {
        case Kind::gaussian:
            return b == 0.0 ? a : a + std::sqrt(b) * standard_normal(rng);
        case Kind::bernoulli_pm:
            return uniform_unit(rng) < a ? 1.0 : -1.0;
        case Kind::uniform:
            return a + (b - a) * uniform_unit(rng);
        case Kind::discrete: {
            double u = uniform_unit(rng), acc = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                acc += weights[i];
                if (u < acc) return atoms[i];
            }
            return atoms.back();
        }
        }
        throw std::logic_error("IncrementLaw::sample");
    }

    double log_mgf(double t) const {
        switch (kind) {
        case Kind::gaussian:
            return a * t + 0.5 * b * t * t;
        case Kind::bernoulli_pm: {
            if (a == 0.0) return -t;
            if (a == 1.0) return t;
            return log_add_exp(std::log(a) + t, std::log(1.0 - a) - t);
        }
        case Kind::uniform: {
            if (std::abs(t) < 1e-8) {
                // series of log((e^{tb}-e^{ta})/(t(b-a))) around t=0
                const double m1 = 0.5 * (a + b);
                const double m2 = (a * a + a * b + b * b) / 3.0;
                return t * m1 + 0.5 * t * t * (m2 - m1 * m1);
            }
            const double hi = t * b, lo = t * a;
            const double m = std::max(hi, lo);
            return m + std::log((std::exp(hi - m) - std::exp(lo - m)) / (t * (b - a)));
        }
        case Kind::discrete: {
            std::vector<double> terms(atoms.size());
            for (std::size_t i = 0; i < atoms.size(); ++i)
                terms[i] = std::log(weights[i] > 0 ? weights[i] : 1e-300) + t * atoms[i];
            return log_sum_exp(terms);
        }
        }
        throw std::logic_error("IncrementLaw::log_mgf");
    }

    double mean() const {
        switch (kind) {
        case Kind::gaussian: return a;
        case Kind::bernoulli_pm: return 2.0 * a - 1.0;
        case Kind::uniform: return 0.5 * (a + b);
        case Kind::discrete: {
            double m = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) m += weights[i] * atoms[i];
            return m;
        }
        }
        throw std::logic_error("IncrementLaw::mean");
    }

    double variance() const {
        switch (kind) {
        case Kind::gaussian: return b;
        case Kind::bernoulli_pm: { double m = mean(); return 1.0 - m * m; }
        case Kind::uniform: { double d = b - a; return d * d / 12.0; }
        case Kind::discrete: {
            double m = mean(), v = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i)
                v += weights[i] * (atoms[i] - m) * (atoms[i] - m);
            return v;
        }
        }
        throw std::logic_error("IncrementLaw::variance");
    }

    // True when the law is invariant under negation.
    bool sign_symmetric() const {
        switch (kind) {
        case Kind::gaussian: return a == 0.0;
        case Kind::bernoulli_pm: return a == 0.5;
        case Kind::uniform: return a == -b;
        case Kind::discrete: {
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                double w_neg = 0.0;
                for (std::size_t j = 0; j < atoms.size(); ++j)
                    if (std::abs(atoms[j] + atoms[i]) < 1e-12) w_neg += weights[j];
                if (std::abs(w_neg - weights[i]) > 1e-12) return false;
            }
            return true;
        }
        }
        return false;
    }
};

} // namespace felab
