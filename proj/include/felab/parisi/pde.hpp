#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "felab/parisi/zeta.hpp"
#include "felab/quadrature.hpp"
#include "felab/stats.hpp"

namespace felab::parisi {

// Uniform solver grid on [-L, L]; nx is odd so x = 0 is a grid point.
struct GridConfig {
    double half_width = 0.0; // 0: auto, max(6, 4 sqrt(xi'(1)) + 2)
    int nx = 4097;
    int quad_nodes = 96;

    double resolve_half_width(const MixtureXi& xi) const {
        if (half_width > 0.0) return half_width;
        return std::max(6.0, 4.0 * std::sqrt(std::max(xi.d1(1.0), 0.0)) + 2.0);
    }
};

namespace detail {

// 4-point Lagrange interpolation on a uniform grid with linear extension
// beyond the ends (the interpolated functions have slope bounded by 1).
struct GridFn {
    const std::vector<double>* f = nullptr;
    double x0 = 0.0, h = 1.0;

    double eval(double x) const {
        const auto& v = *f;
        const std::ptrdiff_t n = std::ptrdiff_t(v.size());
        const double s = (x - x0) / h;
        if (s <= 0.0) return v[0] + (v[1] - v[0]) * s;
        if (s >= double(n - 1)) {
            const double t = s - double(n - 1);
            return v[n - 1] + (v[n - 1] - v[n - 2]) * t;
        }
        std::ptrdiff_t j = std::ptrdiff_t(s);
        j = std::clamp<std::ptrdiff_t>(j - 1, 0, n - 4);
        const double t = s - double(j); // in [0,3]
        const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
        const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
        const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        return w0 * v[j] + w1 * v[j + 1] + w2 * v[j + 2] + w3 * v[j + 3];
    }
};

// One Cole-Hopf step: given Phi at the right end of an interval with constant
// zeta = m and accumulated Gaussian variance v, produce Phi at the left end.
//   m > 0: Phi_new(x) = (1/m) log E_Z exp(m Phi(x + sqrt(v) Z))
//   m = 0: Phi_new(x) = E_Z Phi(x + sqrt(v) Z)
// `boundary` switches the source to the exact log cosh instead of the grid.
inline std::vector<double> cole_hopf_substep(const std::vector<double>& phi_right, bool boundary,
                                             double x0, double h, double v, double m, int quad_nodes) {
    const std::size_t nx = phi_right.size();
    if (v <= 1e-15) return phi_right;
    const auto& rule = gauss_hermite(quad_nodes);
    const std::size_t nq = rule.nodes.size();
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    std::vector<double> offs(nq), w(nq);
    for (std::size_t i = 0; i < nq; ++i) {
        offs[i] = std::sqrt(2.0 * v) * rule.nodes[i];
        w[i] = rule.weights[i] * inv_sqrt_pi;
    }
    GridFn src{&phi_right, x0, h};
    std::vector<double> out(nx);
    std::vector<double> vals(nq);
    for (std::size_t j = 0; j < nx; ++j) {
        const double x = x0 + h * double(j);
        double vmax = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nq; ++i) {
            const double y = x + offs[i];
            vals[i] = boundary ? log_cosh(y) : src.eval(y);
            if (vals[i] > vmax) vmax = vals[i];
        }
        if (m > 1e-12) {
            double acc = 0.0;
            for (std::size_t i = 0; i < nq; ++i) acc += w[i] * std::exp(m * (vals[i] - vmax));
            out[j] = vmax + std::log(acc) / m;
        } else {
            double acc = 0.0;
            for (std::size_t i = 0; i < nq; ++i) acc += w[i] * vals[i];
            out[j] = acc;
        }
    }
    return out;
}

// Full interval step. Convolving log cosh with a wide Gaussian strains the
// quadrature (the integrand's complex poles close in on the axis as the
// variance grows), so the variance is spent in sub-steps of at most v_max;
// the composition is exact for constant zeta.
inline std::vector<double> cole_hopf_step(const std::vector<double>& phi_right, bool boundary,
                                          double x0, double h, double v, double m, int quad_nodes,
                                          double v_max = 0.5) {
    if (v <= 1e-15) return phi_right;
    const int n_sub = std::max(1, int(std::ceil(v / v_max)));
    const double dv = v / double(n_sub);
    std::vector<double> cur =
        cole_hopf_substep(phi_right, boundary, x0, h, dv, m, quad_nodes);
    for (int s = 1; s < n_sub; ++s)
        cur = cole_hopf_substep(cur, false, x0, h, dv, m, quad_nodes);
    return cur;
}

} // namespace detail

// Solution record: Phi on the grid at every breakpoint time of the step
// order parameter (times[0] = 0, times.back() = 1), slope tables by centered
// differences, and the value Phi(0,0).
struct PdeSolution {
    MixtureXi xi;
    PiecewiseConstant zeta;
    std::vector<double> times;
    double x0 = 0.0, h = 0.0;
    int nx = 0, quad_nodes = 0;
    std::vector<std::vector<double>> phi;  // phi[l] at times[l]
    std::vector<std::vector<double>> dphi; // same layout
    double phi00 = 0.0;

    double grid_x(int j) const { return x0 + h * j; }
};

namespace detail {
inline std::vector<double> centered_slope(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    d[0] = (f[1] - f[0]) / h;
    d[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    return d;
}

inline void check_slice_invariants(const std::vector<double>& f, double h) {
    for (std::size_t j = 1; j + 1 < f.size(); ++j)
        if (f[j + 1] - 2.0 * f[j] + f[j - 1] < -1e-8)
            throw std::runtime_error("parisi_pde_solve: convexity violated");
    for (std::size_t j = 1; j < f.size(); ++j)
        if (std::abs(f[j] - f[j - 1]) > h * (1.0 + 1e-9))
            throw std::runtime_error("parisi_pde_solve: slope bound |dPhi/dx| <= 1 violated");
}
} // namespace detail

// Backward solve with one exact Cole-Hopf convolution per constant-zeta
// interval; the variance spent on [a,b] is xi'(b) - xi'(a). The terminal
// slice Phi(1,x) = log cosh(x) is evaluated analytically inside the first
// convolution, so single-interval solves carry pure quadrature error.
inline PdeSolution parisi_pde_solve(const MixtureXi& xi, const PiecewiseConstant& zeta,
                                    const GridConfig& cfg = {}) {
    if (cfg.nx < 2049) throw std::invalid_argument("parisi_pde_solve: nx < 2049");
    if (cfg.nx % 2 == 0) throw std::invalid_argument("parisi_pde_solve: nx must be odd");
    if (cfg.quad_nodes < 64) throw std::invalid_argument("parisi_pde_solve: quad_nodes < 64");
    const double half = cfg.resolve_half_width(xi);
    const double total_var = std::max(xi.d1(1.0) - xi.d1(0.0), 0.0);
    // boundary influence guard: at most 1% of the total Gaussian mass may
    // leave the grid from the origin
    if (total_var > 0.0 && std::erfc(half / std::sqrt(2.0 * total_var)) > 0.01)
        throw std::invalid_argument("parisi_pde_solve: grid too small for xi'(1)");

    PdeSolution sol;
    sol.xi = xi;
    sol.zeta = zeta;
    sol.nx = cfg.nx;
    sol.quad_nodes = cfg.quad_nodes;
    sol.x0 = -half;
    sol.h = 2.0 * half / double(cfg.nx - 1);

    const std::size_t k = zeta.intervals();
    sol.times.resize(k + 1);
    sol.times[0] = 0.0;
    for (std::size_t l = 0; l < k; ++l) sol.times[l + 1] = zeta.breakpoints[l];

    sol.phi.assign(k + 1, {});
    // terminal slice for the record (and for zero-variance copies)
    sol.phi[k].resize(cfg.nx);
    for (int j = 0; j < cfg.nx; ++j) sol.phi[k][j] = log_cosh(sol.x0 + sol.h * j);

    for (std::size_t l = k; l-- > 0;) {
        const double v = xi.d1(sol.times[l + 1]) - xi.d1(sol.times[l]);
        const bool boundary = (l + 1 == k);
        sol.phi[l] = detail::cole_hopf_step(sol.phi[l + 1], boundary, sol.x0, sol.h, v,
                                            zeta.values[l], cfg.quad_nodes);
        detail::check_slice_invariants(sol.phi[l], sol.h);
    }
    sol.dphi.resize(k + 1);
    for (std::size_t l = 0; l <= k; ++l) sol.dphi[l] = detail::centered_slope(sol.phi[l], sol.h);
    sol.phi00 = sol.phi[0][(cfg.nx - 1) / 2];
    return sol;
}

inline PdeSolution parisi_pde_solve(const MixtureXi& xi, const StepZeta& zeta,
                                    const GridConfig& cfg = {}) {
    return parisi_pde_solve(xi, zeta.profile(), cfg);
}

// Phi and its x-slope on the grid at an arbitrary time, via one Cole-Hopf
// step from the stored slice at the next breakpoint.
inline std::pair<std::vector<double>, std::vector<double>>
phi_slice_at(const PdeSolution& sol, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("phi_slice_at: t outside [0,1]");
    const std::size_t k = sol.zeta.intervals();
    std::size_t l = 0;
    while (l < k && !(t < sol.times[l + 1])) ++l;
    if (l >= k) { // t == 1
        return {sol.phi[k], sol.dphi[k]};
    }
    if (t == sol.times[l]) return {sol.phi[l], sol.dphi[l]};
    const double v = sol.xi.d1(sol.times[l + 1]) - sol.xi.d1(t);
    const bool boundary = (l + 1 == k);
    auto phi = detail::cole_hopf_step(sol.phi[l + 1], boundary, sol.x0, sol.h, v,
                                      sol.zeta.values[l], sol.quad_nodes);
    auto dphi = detail::centered_slope(phi, sol.h);
    return {std::move(phi), std::move(dphi)};
}

} // namespace felab::parisi
