#pragma once

#include <algorithm>
#include <functional>
#include <limits>

#include "felab/parisi/pde.hpp"
#include "felab/seeding.hpp"

namespace felab::parisi {

// P(zeta) = Phi(0,0) - 1/2 int_0^1 t xi''(t) zeta(t) dt; the correction
// integral is a closed-form polynomial sum per constant piece.
inline double parisi_functional(const MixtureXi& xi, const PiecewiseConstant& zeta,
                                const GridConfig& cfg = {}) {
    const PdeSolution sol = parisi_pde_solve(xi, zeta, cfg);
    double correction = 0.0;
    for (std::size_t l = 0; l < zeta.intervals(); ++l)
        correction += zeta.values[l] * xi.t_xi2_integral(zeta.left_endpoint(l), zeta.breakpoints[l]);
    return sol.phi00 - 0.5 * correction;
}

inline double parisi_functional(const MixtureXi& xi, const StepZeta& zeta,
                                const GridConfig& cfg = {}) {
    return parisi_functional(xi, zeta.profile(), cfg);
}

namespace detail {

// Nelder-Mead with best-ever tracking; deterministic given the start simplex.
struct NelderMeadResult {
    std::vector<double> best_x;
    double best_f = std::numeric_limits<double>::infinity();
    bool converged = false;
};

inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, double step, int max_iter,
                                    double ftol) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> xs(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step;
    std::vector<double> fs(n + 1);
    NelderMeadResult res;
    auto record = [&](const std::vector<double>& x, double v) {
        if (v < res.best_f) {
            res.best_f = v;
            res.best_x = x;
        }
    };
    for (std::size_t i = 0; i <= n; ++i) {
        fs[i] = f(xs[i]);
        record(xs[i], fs[i]);
    }
    for (int it = 0; it < max_iter; ++it) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t lo = order[0], hi = order[n], second = order[n - 1];
        if (std::abs(fs[hi] - fs[lo]) < ftol * (1.0 + std::abs(fs[lo]))) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != hi)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d] / double(n);
        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d)
                x[d] = centroid[d] + coef * (xs[hi][d] - centroid[d]);
            return x;
        };
        std::vector<double> xr = blend(-1.0);
        const double fr = f(xr);
        record(xr, fr);
        if (fr < fs[lo]) {
            std::vector<double> xe = blend(-2.0);
            const double fe = f(xe);
            record(xe, fe);
            xs[hi] = fe < fr ? xe : xr;
            fs[hi] = std::min(fe, fr);
        } else if (fr < fs[second]) {
            xs[hi] = xr;
            fs[hi] = fr;
        } else {
            std::vector<double> xc = blend(0.5);
            const double fc = f(xc);
            record(xc, fc);
            if (fc < fs[hi]) {
                xs[hi] = xc;
                fs[hi] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == lo) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        xs[i][d] = xs[lo][d] + 0.5 * (xs[i][d] - xs[lo][d]);
                    fs[i] = f(xs[i]);
                    record(xs[i], fs[i]);
                }
            }
        }
    }
    return res;
}

// raw parameters -> valid k-step profile: breakpoints clamped to (0,1) and
// sorted, values clamped to [0,1] and sorted (monotone reparameterization)
inline PiecewiseConstant params_to_profile(const std::vector<double>& raw, int k) {
    const double eps = 1e-4;
    std::vector<double> bps;
    for (int i = 0; i < k - 1; ++i) bps.push_back(std::clamp(raw[i], eps, 1.0 - eps));
    std::sort(bps.begin(), bps.end());
    std::vector<double> vals;
    for (int i = 0; i < k; ++i) vals.push_back(std::clamp(raw[k - 1 + i], 0.0, 1.0));
    std::sort(vals.begin(), vals.end());
    // merge zero-length intervals introduced by clamping ties
    std::vector<double> b2, v2;
    double prev = 0.0;
    for (int l = 0; l < k; ++l) {
        const double right = l + 1 == k ? 1.0 : bps[l];
        if (right - prev > 1e-12) {
            b2.push_back(right);
            v2.push_back(vals[l]);
            prev = right;
        }
    }
    if (b2.empty() || b2.back() != 1.0) {
        b2.push_back(1.0);
        v2.push_back(vals.back());
    }
    return PiecewiseConstant(std::move(b2), std::move(v2));
}

} // namespace detail

struct MinimizeConfig {
    int max_iter = 300;
    double ftol = 1e-10;
    int n_restarts = 3; // deterministic anchors plus this many seeded restarts
    std::uint64_t seed = 0;
    GridConfig grid{0.0, 2049, 64}; // one fixed grid so nesting compares equal evaluations
};

struct MinimizeResult {
    StepZeta zeta;
    double value = std::numeric_limits<double>::infinity();
    bool converged = false;
    int k = 1;
};

// inf over k-atom step order parameters by Nelder-Mead on the sorted/clamped
// parameterization. Runs the ladder 1..k and seeds each level with the lifted
// minimizer of the previous one, so the value is nonincreasing in k.
inline MinimizeResult parisi_minimize(const MixtureXi& xi, int k_atoms,
                                      const MinimizeConfig& cfg = {}) {
    if (k_atoms < 1 || k_atoms > 4) throw std::invalid_argument("parisi_minimize: need 1 <= k <= 4");
    if (xi.zero()) {
        MinimizeResult res;
        res.zeta = StepZeta::constant(0.0);
        res.value = 0.0;
        res.converged = true;
        res.k = k_atoms;
        return res;
    }

    MinimizeResult best;
    std::vector<double> lifted; // raw params carried up the ladder
    for (int k = 1; k <= k_atoms; ++k) {
        auto eval = [&](const std::vector<double>& raw) {
            return parisi_functional(xi, detail::params_to_profile(raw, k), cfg.grid);
        };
        std::vector<std::vector<double>> starts;
        auto flat_start = [&](double m) {
            std::vector<double> raw;
            for (int i = 0; i < k - 1; ++i) raw.push_back(double(i + 1) / k);
            for (int i = 0; i < k; ++i) raw.push_back(m);
            return raw;
        };
        starts.push_back(flat_start(1.0));
        starts.push_back(flat_start(0.0));
        starts.push_back(flat_start(0.5));
        if (!lifted.empty()) starts.push_back(lifted);
        Rng rng = make_rng(derive_seed(cfg.seed, 17, std::uint64_t(k)));
        for (int r = 0; r < cfg.n_restarts; ++r) {
            std::vector<double> raw;
            for (int i = 0; i < k - 1; ++i) raw.push_back(uniform_unit(rng));
            std::vector<double> ms;
            for (int i = 0; i < k; ++i) ms.push_back(uniform_unit(rng));
            raw.insert(raw.end(), ms.begin(), ms.end());
            starts.push_back(raw);
        }

        detail::NelderMeadResult level_best;
        for (const auto& s : starts) {
            auto r = detail::nelder_mead(eval, s, 0.15, cfg.max_iter, cfg.ftol);
            if (r.best_f < level_best.best_f) level_best = r;
        }
        if (level_best.best_f < best.value) {
            PiecewiseConstant prof = detail::params_to_profile(level_best.best_x, k);
            best.zeta = StepZeta(prof.breakpoints, prof.values);
            best.value = level_best.best_f;
            best.converged = level_best.converged;
            best.k = k;
        }
        // lift the level minimizer to k+1 raw parameters: split the widest
        // interval, duplicate its value
        PiecewiseConstant prof = detail::params_to_profile(level_best.best_x, k);
        std::vector<double> bps(prof.breakpoints.begin(), prof.breakpoints.end() - 1);
        std::vector<double> vals = prof.values;
        std::size_t widest = 0;
        double wid = 0.0;
        for (std::size_t l = 0; l < prof.intervals(); ++l) {
            const double w = prof.breakpoints[l] - prof.left_endpoint(l);
            if (w > wid) {
                wid = w;
                widest = l;
            }
        }
        bps.push_back(0.5 * (prof.left_endpoint(widest) + prof.breakpoints[widest]));
        std::sort(bps.begin(), bps.end());
        vals.insert(vals.begin() + widest, vals[widest]);
        while (int(vals.size()) < k + 1) vals.push_back(vals.back());
        while (int(bps.size()) < k) bps.push_back(1.0 - 1e-4);
        lifted = bps;
        lifted.insert(lifted.end(), vals.begin(), vals.end());
    }
    return best;
}

} // namespace felab::parisi
