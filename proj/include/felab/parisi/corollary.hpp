#pragma once

#include "felab/parisi/functional.hpp"

namespace felab::parisi {

// Both chains of the log(2) subadditivity bound for variational free
// energies:
//   minimized:  F(xi1+xi2)            <= F(xi1) + F(xi2) + log 2
//   proof path: P_{xi1+xi2}(combined) <= F(xi1) + F(xi2) + log 2
// with the combined order parameter from zeta_combine, step-approximated on
// a dense grid. slack_min uses the better of the direct minimization and the
// combined evaluation for F(xi1+xi2).
struct CorollaryReport {
    double f1 = 0.0, f2 = 0.0;
    double f12 = 0.0;             // min(direct minimization, combined-zeta value)
    double p12_at_combined = 0.0; // P_{xi1+xi2}(zeta from zeta_combine)
    double slack_min = 0.0;       // f1 + f2 + log2 - f12
    double slack_chain = 0.0;     // f1 + f2 + log2 - p12_at_combined
    StepZeta zeta1, zeta2;
};

struct CorollaryConfig {
    int k_atoms = 3;
    MinimizeConfig minimize{};
    int combined_cells = 64;
    double tolerance = 1e-4; // slack may dip this far below 0 numerically
};

inline CorollaryReport corollary_parisi_check(const MixtureXi& xi1, const MixtureXi& xi2,
                                              const CorollaryConfig& cfg = {}) {
    CorollaryReport rep;
    MinimizeResult m1 = parisi_minimize(xi1, cfg.k_atoms, cfg.minimize);
    MinimizeResult m2 = parisi_minimize(xi2, cfg.k_atoms, cfg.minimize);
    rep.f1 = m1.value;
    rep.f2 = m2.value;
    rep.zeta1 = m1.zeta;
    rep.zeta2 = m2.zeta;

    const MixtureXi sum = xi1 + xi2;
    MinimizeResult m12 = parisi_minimize(sum, cfg.k_atoms, cfg.minimize);

    double p12 = m12.value;
    if (!xi1.zero() || !xi2.zero()) {
        CombinedZeta combined = zeta_combine(xi1, m1.zeta, xi2, m2.zeta);
        p12 = parisi_functional(sum, combined.to_profile(cfg.combined_cells), cfg.minimize.grid);
    }
    rep.p12_at_combined = p12;
    rep.f12 = std::min(m12.value, p12);
    const double log2 = std::log(2.0);
    rep.slack_min = rep.f1 + rep.f2 + log2 - rep.f12;
    rep.slack_chain = rep.f1 + rep.f2 + log2 - rep.p12_at_combined;
    if (rep.slack_min < -cfg.tolerance || rep.slack_chain < -cfg.tolerance)
        throw std::runtime_error("corollary_parisi_check: slack below -tolerance");
    return rep;
}

// Scalar inequality behind the proof: log(2 cosh(x+y)) <= log(2 cosh x) +
// log(2 cosh y), i.e. log cosh(x+y) <= log cosh x + log cosh y + log 2.
inline double log_2cosh_subadditivity_gap(double x, double y) {
    const double lhs = log_cosh(x + y) + std::log(2.0);
    const double rhs = (log_cosh(x) + std::log(2.0)) + (log_cosh(y) + std::log(2.0));
    return rhs - lhs; // >= 0
}

} // namespace felab::parisi
