#pragma once

#include <stdexcept>
#include <vector>

namespace felab {

// Coefficient vector (c_p)_{p=1..P} of the mixture xi(x) = sum_p c_p x^p.
// Derivatives are evaluated by Horner's rule.
struct MixtureXi {
    std::vector<double> c; // c[p-1] = c_p

    MixtureXi() = default;
    explicit MixtureXi(std::vector<double> coeffs) : c(std::move(coeffs)) {
        for (double v : c)
            if (v < 0) throw std::invalid_argument("MixtureXi: c_p < 0");
        while (!c.empty() && c.back() == 0.0) c.pop_back();
    }

    int max_degree() const { return static_cast<int>(c.size()); }
    bool zero() const { return c.empty(); }

    double operator()(double x) const {
        double acc = 0.0;
        for (int p = max_degree(); p >= 1; --p) acc = (acc + c[p - 1]) * x;
        return acc;
    }
    double d1(double x) const {
        double acc = 0.0;
        for (int p = max_degree(); p >= 2; --p) acc = (acc + p * c[p - 1]) * x;
        return acc + (c.empty() ? 0.0 : c[0]);
    }
    double d2(double x) const {
        if (max_degree() < 2) return 0.0;
        double acc = 0.0;
        for (int p = max_degree(); p >= 3; --p) acc = (acc + p * (p - 1) * c[p - 1]) * x;
        return acc + 2.0 * c[1];
    }
    double xi1() const { return (*this)(1.0); } // sum of c_p

    MixtureXi operator+(const MixtureXi& o) const {
        std::vector<double> s(std::max(c.size(), o.c.size()), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) s[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) s[i] += o.c[i];
        return MixtureXi(std::move(s));
    }

    // int_a^b t xi''(t) dt, in closed form (used by the order-parameter
    // correction integral): sum_p c_p (p-1) (b^p - a^p).
    double t_xi2_integral(double a, double b) const {
        double acc = 0.0;
        for (int p = 2; p <= max_degree(); ++p)
            acc += c[p - 1] * (p - 1) * (std::pow(b, p) - std::pow(a, p));
        return acc;
    }
};

} // namespace felab
