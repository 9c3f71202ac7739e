#pragma once

#include <atomic>
#include <cmath>

#include "felab/free_energy.hpp"
#include "felab/parisi/pde.hpp"

namespace felab::parisi {

// Admissible control for the stochastic representation: |u| <= 1 throughout.
struct ControlConfig {
    enum class Kind { zero, constant, pde_feedback };
    Kind kind = Kind::zero;
    double u0 = 0.0; // constant control value
    std::uint64_t n_steps = 1000;
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct ControlEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::uint64_t n_paths = 0;
};

// Euler simulation of the controlled diffusion
//   ds = zeta(t) xi''(t) u dt + sqrt(xi''(t)) dB,
// payoff X = log cosh(s_1) - 1/2 int zeta xi'' u^2 dt. Per-step Gaussian
// variance is taken exactly as xi'(t_{j+1}) - xi'(t_j). The pde_feedback
// control is u = dPhi/dx(t, s) read from per-step slope tables of the
// solved PDE and clamped to [-1,1] (the solution certifies |dPhi/dx| <= 1,
// the clamp covers interpolation roundoff).
inline ControlEstimate ac_simulate(const MixtureXi& xi, const PiecewiseConstant& zeta,
                                   const ControlConfig& cfg,
                                   const PdeSolution* feedback = nullptr) {
    if (cfg.n_steps < 1000) throw std::invalid_argument("ac_simulate: n_steps < 1000");
    if (cfg.n_paths < 1) throw std::invalid_argument("ac_simulate: n_paths < 1");
    if (cfg.kind == ControlConfig::Kind::constant && std::abs(cfg.u0) > 1.0)
        throw std::invalid_argument("ac_simulate: |u| > 1 not admissible");
    if (cfg.kind == ControlConfig::Kind::pde_feedback && feedback == nullptr)
        throw std::invalid_argument("ac_simulate: pde_feedback needs a PdeSolution");

    const std::uint64_t steps = cfg.n_steps;
    const double dt = 1.0 / double(steps);
    std::vector<double> drift_coef(steps), noise_sd(steps);
    for (std::uint64_t j = 0; j < steps; ++j) {
        const double t = double(j) * dt;
        drift_coef[j] = zeta(t) * xi.d2(t);
        const double dv = xi.d1(double(j + 1) * dt) - xi.d1(t);
        noise_sd[j] = std::sqrt(std::max(dv, 0.0));
    }
    // slope tables per step time for the feedback control
    std::vector<std::vector<double>> slopes;
    double fx0 = 0.0, fh = 1.0;
    if (cfg.kind == ControlConfig::Kind::pde_feedback) {
        slopes.resize(steps);
        for (std::uint64_t j = 0; j < steps; ++j)
            slopes[j] = phi_slice_at(*feedback, double(j) * dt).second;
        fx0 = feedback->x0;
        fh = feedback->h;
    }
    auto feedback_u = [&](std::uint64_t j, double s) {
        const auto& d = slopes[j];
        const double pos = (s - fx0) / fh;
        if (pos <= 0.0) return std::clamp(d.front(), -1.0, 1.0);
        if (pos >= double(d.size() - 1)) return std::clamp(d.back(), -1.0, 1.0);
        const std::size_t i = std::size_t(pos);
        const double frac = pos - double(i);
        return std::clamp(d[i] * (1.0 - frac) + d[i + 1] * frac, -1.0, 1.0);
    };

    std::vector<double> payoff(cfg.n_paths);
    parallel_for_indexed(cfg.n_paths, cfg.threads, [&](std::uint64_t p) {
        Rng rng = make_rng(derive_seed(cfg.seed, 0, p));
        double s = 0.0, cost = 0.0;
        for (std::uint64_t j = 0; j < steps; ++j) {
            double u = 0.0;
            switch (cfg.kind) {
            case ControlConfig::Kind::zero: break;
            case ControlConfig::Kind::constant: u = cfg.u0; break;
            case ControlConfig::Kind::pde_feedback: u = feedback_u(j, s); break;
            }
            cost += 0.5 * drift_coef[j] * u * u * dt;
            s += drift_coef[j] * u * dt + noise_sd[j] * standard_normal(rng);
        }
        payoff[p] = log_cosh(s) - cost;
    });

    ControlEstimate est;
    est.mean = mean_of(payoff);
    est.std_err = cfg.n_paths >= 2
        ? sample_sd(payoff, est.mean) / std::sqrt(double(cfg.n_paths)) : 0.0;
    est.n_paths = cfg.n_paths;
    return est;
}

inline ControlEstimate ac_simulate(const MixtureXi& xi, const StepZeta& zeta,
                                   const ControlConfig& cfg,
                                   const PdeSolution* feedback = nullptr) {
    return ac_simulate(xi, zeta.profile(), cfg, feedback);
}

} // namespace felab::parisi
