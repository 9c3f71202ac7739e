#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace felab {

// Neumaier compensated sum; accumulation order is always index order so
// parallel runs reduce to identical bits.
inline double compensated_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

inline double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean_of: empty sample");
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

// Sample standard deviation (n-1 denominator); 0 for n < 2.
inline double sample_sd(std::span<const double> xs, double mean) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = xs[i] - mean;
        sq[i] = d * d;
    }
    return std::sqrt(compensated_sum(sq) / static_cast<double>(n - 1));
}

// log(sum_i e^{x_i}) with max shift; tolerates -inf entries, rejects NaN.
inline double log_sum_exp(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("log_sum_exp: empty input");
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        if (std::isnan(x)) throw std::domain_error("log_sum_exp: NaN input");
        if (x > m) m = x;
    }
    if (std::isinf(m) && m < 0) return m;
    std::vector<double> ex(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ex[i] = std::exp(xs[i] - m);
    return m + std::log(compensated_sum(ex));
}

// log((e^a + e^b)) stable in both arguments.
inline double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (std::isinf(a) && a < 0) return a;
    return a + std::log1p(std::exp(b - a));
}

// log(cosh(x)) without overflow; series branch avoids cancellation near 0.
inline double log_cosh(double x) {
    const double a = std::abs(x);
    if (a < 1e-4) {
        const double a2 = a * a;
        return 0.5 * a2 * (1.0 - a2 / 6.0);
    }
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

} // namespace felab
