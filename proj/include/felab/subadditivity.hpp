#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "felab/free_energy.hpp"

namespace felab {

enum class Verdict { holds_within_CI, violated_beyond_CI, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::holds_within_CI: return "holds_within_CI";
    case Verdict::violated_beyond_CI: return "violated_beyond_CI";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

// Statistical test of F(L1+L2) <= F(L1) + F(L2). slack = F1 + F2 - F12;
// a violation is declared only when slack < -z * combined_stderr.
struct SubadditivityReport {
    FreeEnergyEstimate f1, f2, f12;
    double slack = 0.0;
    double combined_std_err = 0.0;
    double z = 3.0;
    Verdict verdict = Verdict::inconclusive;
};

struct SubadditivityConfig {
    std::uint64_t n_disorder = 1000;
    std::uint64_t seed = 0;
    double z = 3.0;
    std::optional<StateMcConfig> state_mc;
    int threads = 1;
};

// Coupled estimator: realization r draws H1 from stream 1 and H2 from
// stream 2, and the three log Z values (H1, H2, H1+H2) are computed on the
// same pair, sharing the state draws in MC mode. Each marginal estimate is
// a plain MC estimate; the coupling makes slack an exact 0 when one law is
// deterministic zero and reduces the variance of the difference. The
// theorem needs L1 invariant; a tag of none is legitimate input (the bound
// can genuinely fail there), so it is not an error.
inline SubadditivityReport subadditivity_report(const HamiltonianLaw& l1,
                                                const HamiltonianLaw& l2,
                                                ReferenceMeasure measure,
                                                const SubadditivityConfig& cfg) {
    if (!(l1.space == l2.space))
        throw std::invalid_argument("subadditivity_report: mismatched state spaces");
    if (cfg.n_disorder < 1)
        throw std::invalid_argument("subadditivity_report: n_disorder < 1");
    const StateSpace& space = l1.space;
    const bool exact = space.enumerable();
    if (!exact && (!cfg.state_mc || cfg.state_mc->n_samples < 1))
        throw std::invalid_argument("subadditivity_report: non-enumerable space needs state MC");

    const std::uint64_t n = cfg.n_disorder;
    std::vector<double> z1(n), z2(n), z12(n);
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};

    parallel_for_indexed(n, cfg.threads, [&](std::uint64_t r) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            HamiltonianSample s1 = l1.sample(derive_seed(cfg.seed, 1, r));
            HamiltonianSample s2 = l2.sample(derive_seed(cfg.seed, 2, r));
            std::vector<double> e1, e2;
            if (exact) {
                const std::uint64_t ns = space.size();
                auto fill = [&](const HamiltonianSample& s, std::vector<double>& e) {
                    if (s.has_table()) {
                        e = s.full_table;
                    } else {
                        e.resize(ns);
                        State st;
                        for (std::uint64_t i = 0; i < ns; ++i) {
                            space.materialize(i, st);
                            e[i] = s.evaluate(st);
                        }
                    }
                };
                fill(s1, e1);
                fill(s2, e2);
            } else {
                const std::uint64_t ns = cfg.state_mc->n_samples;
                Rng rng = make_rng(derive_seed(derive_seed(cfg.seed, 3, r), 1, 0));
                e1.resize(ns);
                e2.resize(ns);
                for (std::uint64_t i = 0; i < ns; ++i) {
                    State st = space.sample_state(rng);
                    e1[i] = s1.evaluate(st);
                    e2[i] = s2.evaluate(st);
                }
            }
            std::vector<double> e12(e1.size());
            for (std::size_t i = 0; i < e1.size(); ++i) e12[i] = e1[i] + e2[i];
            const double norm = exact
                ? (measure.convention == Convention::probability ? space.log_cardinality() : 0.0)
                : std::log(double(e1.size()));
            if (!exact && measure.convention == Convention::counting)
                throw std::invalid_argument("subadditivity_report: counting needs a finite space");
            z1[r] = log_sum_exp(e1) - norm;
            z2[r] = log_sum_exp(e2) - norm;
            z12[r] = log_sum_exp(e12) - norm;
        } catch (...) {
            if (!failed.exchange(true)) first_error = std::current_exception();
        }
    });
    if (failed.load()) std::rethrow_exception(first_error);

    SubadditivityReport rep;
    rep.z = cfg.z;
    auto assemble = [&](const std::vector<double>& zs) {
        FreeEnergyEstimate est;
        est.mean = mean_of(zs);
        est.std_err = n >= 2 ? sample_sd(zs, est.mean) / std::sqrt(double(n)) : 0.0;
        est.std_err_defined = n >= 2;
        est.n_disorder = n;
        est.n_state_samples = exact ? 0 : cfg.state_mc->n_samples;
        est.seed = cfg.seed;
        est.convention = measure.convention;
        return est;
    };
    rep.f1 = assemble(z1);
    rep.f2 = assemble(z2);
    rep.f12 = assemble(z12);

    rep.slack = rep.f1.mean + rep.f2.mean - rep.f12.mean;
    rep.combined_std_err = std::sqrt(rep.f1.std_err * rep.f1.std_err +
                                     rep.f2.std_err * rep.f2.std_err +
                                     rep.f12.std_err * rep.f12.std_err);
    if (!std::isfinite(rep.slack) || !std::isfinite(rep.combined_std_err))
        rep.verdict = Verdict::inconclusive;
    else if (rep.slack < -cfg.z * rep.combined_std_err)
        rep.verdict = Verdict::violated_beyond_CI;
    else
        rep.verdict = Verdict::holds_within_CI;
    return rep;
}

// The two-point deterministic pair: lhs = F(L1+L2) = log((1+e^{2x})/2),
// rhs = F(L1)+F(L2) = 2 log((1+e^x)/2). lhs > rhs for every x != 0, so
// subadditivity fails without the symmetry hypothesis.
inline std::pair<double, double> two_point_counterexample(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("two_point_counterexample: x not finite");
    const double lhs = log_add_exp(0.0, 2.0 * x) - std::log(2.0);
    const double rhs = 2.0 * (log_add_exp(0.0, x) - std::log(2.0));
    return {lhs, rhs};
}

// Checks E[ <f>_Gibbs ] = mu(f) for the tilted measure of an invariant law:
// lhs averages the exact Gibbs mean of f over disorder draws, rhs is the
// plain mu-average. Enumerable spaces only.
struct TiltedMeanCheck {
    double lhs = 0.0, rhs = 0.0, gap = 0.0, lhs_std_err = 0.0;
};

inline TiltedMeanCheck tilted_measure_mean_check(const HamiltonianLaw& law,
                                                 const std::function<double(const State&)>& f,
                                                 std::uint64_t n_disorder, std::uint64_t seed,
                                                 int threads = 1) {
    if (!law.space.enumerable())
        throw std::invalid_argument("tilted_measure_mean_check: space not enumerable");
    const std::uint64_t n_states = law.space.size();
    std::vector<double> f_vals(n_states);
    {
        State s;
        for (std::uint64_t i = 0; i < n_states; ++i) {
            law.space.materialize(i, s);
            f_vals[i] = f(s);
        }
    }
    std::vector<double> gibbs(n_disorder);
    parallel_for_indexed(n_disorder, threads, [&](std::uint64_t r) {
        HamiltonianSample sample = law.sample(derive_seed(seed, 0, r));
        std::vector<double> energies;
        if (sample.has_table()) {
            energies = sample.full_table;
        } else {
            energies.resize(n_states);
            State s;
            for (std::uint64_t i = 0; i < n_states; ++i) {
                law.space.materialize(i, s);
                energies[i] = sample.evaluate(s);
            }
        }
        double m = -std::numeric_limits<double>::infinity();
        for (double e : energies) m = std::max(m, e);
        double num = 0.0, den = 0.0;
        for (std::uint64_t i = 0; i < n_states; ++i) {
            const double w = std::exp(energies[i] - m);
            num += w * f_vals[i];
            den += w;
        }
        gibbs[r] = num / den;
    });

    TiltedMeanCheck out;
    out.lhs = mean_of(gibbs);
    out.lhs_std_err = n_disorder >= 2
        ? sample_sd(gibbs, out.lhs) / std::sqrt(double(n_disorder)) : 0.0;
    out.rhs = mean_of(f_vals);
    out.gap = out.lhs - out.rhs;
    return out;
}

} // namespace felab
