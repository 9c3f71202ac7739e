#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "felab/hamiltonian.hpp"
#include "felab/stats.hpp"

namespace felab {

// Reference measure convention. The probability convention is the invariant
// probability measure (Z(H=0) = 1); the counting convention multiplies Z by
// |Sigma| and exists only for enumerable spaces.
enum class Convention { probability, counting };

inline const char* convention_name(Convention c) {
    return c == Convention::probability ? "probability" : "counting";
}

struct ReferenceMeasure {
    Convention convention = Convention::probability;
};

// Inner (state-level) Monte Carlo configuration for non-enumerable spaces.
struct StateMcConfig {
    std::uint64_t n_samples = 0; // 0 = exact enumeration required
};

struct LogZ {
    double value = 0.0;
    double mc_stderr = 0.0; // delta-method error of the state-MC mean; 0 when exact
    bool approximate = false;
};

// Deterministic parallel map over [0, n): every index is processed exactly
// once, results land in caller-owned slots, so the reduction afterwards is
// independent of the thread count.
template <class F>
void parallel_for_indexed(std::uint64_t n, int threads, F&& f) {
    if (threads <= 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= n) return;
            f(i);
        }
    };
    std::vector<std::thread> pool;
    const int t = std::min<int>(threads, 64);
    pool.reserve(t);
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// log Z for one realization. Enumerable spaces integrate exactly by
// max-shifted log-sum-exp; otherwise n_samples i.i.d. mu-draws estimate
// log of the sample mean of e^H, with a delta-method error bar.
inline LogZ partition_function(const HamiltonianSample& sample, const StateSpace& space,
                               ReferenceMeasure measure,
                               std::optional<StateMcConfig> state_mc = std::nullopt,
                               std::uint64_t state_seed = 0) {
    if (space.enumerable()) {
        const std::uint64_t n = space.size();
        std::vector<double> energies;
        if (sample.has_table()) {
            if (sample.full_table.size() != n)
                throw std::invalid_argument("partition_function: table size mismatch");
            energies = sample.full_table;
        } else {
            energies.resize(n);
            State s;
            for (std::uint64_t i = 0; i < n; ++i) {
                space.materialize(i, s);
                energies[i] = sample.evaluate(s);
            }
        }
        for (double e : energies)
            if (!std::isfinite(e)) throw std::domain_error("partition_function: non-finite energy");
        LogZ out;
        out.value = log_sum_exp(energies);
        if (measure.convention == Convention::probability) out.value -= space.log_cardinality();
        return out;
    }

    if (measure.convention == Convention::counting)
        throw std::invalid_argument("partition_function: counting convention needs a finite space");
    if (!state_mc || state_mc->n_samples < 1)
        throw std::invalid_argument("partition_function: non-enumerable space needs a state MC config");

    const std::uint64_t n = state_mc->n_samples;
    Rng rng = make_rng(state_seed);
    std::vector<double> energies(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        State s = space.sample_state(rng);
        const double e = sample.evaluate(s);
        if (!std::isfinite(e)) throw std::domain_error("partition_function: non-finite energy");
        energies[i] = e;
    }
    // log mean e^H, with sd(w)/(mean(w) sqrt(n)) as the error of the log.
    const double lse = log_sum_exp(energies);
    LogZ out;
    out.value = lse - std::log(double(n));
    out.approximate = true;
    if (n >= 2) {
        double m = -std::numeric_limits<double>::infinity();
        for (double e : energies) m = std::max(m, e);
        std::vector<double> w(n);
        for (std::uint64_t i = 0; i < n; ++i) w[i] = std::exp(energies[i] - m);
        const double wm = mean_of(w);
        const double wsd = sample_sd(w, wm);
        out.mc_stderr = wsd / (wm * std::sqrt(double(n)));
    }
    return out;
}

// Disorder-averaged log-partition value. stderr is the sample standard
// deviation of per-realization log Z over sqrt(n_disorder); it is reported
// as 0 with stderr_defined=false when n_disorder = 1.
struct FreeEnergyEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    bool std_err_defined = true;
    std::uint64_t n_disorder = 0;
    std::uint64_t n_state_samples = 0; // 0 = exact state integration
    std::uint64_t seed = 0;
    Convention convention = Convention::probability;
    double state_std_err = 0.0; // mean per-realization delta-method error (MC mode)
};

struct QuenchedConfig {
    std::uint64_t n_disorder = 1000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; // seed stream id; reports use distinct streams per law
    std::optional<StateMcConfig> state_mc;
    int threads = 1;
};

// F = E[log Z(H)] by plain Monte Carlo over disorder. Realization r uses
// seed derive_seed(cfg.seed, cfg.stream, r); the state sampler of MC mode
// uses derive_seed(realization_seed, 1, 0). Results do not depend on the
// thread count.
inline FreeEnergyEstimate quenched_free_energy(const HamiltonianLaw& law,
                                               ReferenceMeasure measure,
                                               const QuenchedConfig& cfg) {
    if (cfg.n_disorder < 1)
        throw std::invalid_argument("quenched_free_energy: n_disorder < 1");
    const std::uint64_t n = cfg.n_disorder;
    std::vector<double> logzs(n);
    std::vector<double> state_errs(n, 0.0);
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};

    parallel_for_indexed(n, cfg.threads, [&](std::uint64_t r) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            const std::uint64_t rs = derive_seed(cfg.seed, cfg.stream, r);
            HamiltonianSample sample = law.sample(rs);
            LogZ lz = partition_function(sample, law.space, measure, cfg.state_mc,
                                         derive_seed(rs, 1, 0));
            logzs[r] = lz.value;
            state_errs[r] = lz.mc_stderr;
        } catch (...) {
            if (!failed.exchange(true)) first_error = std::current_exception();
        }
    });
    if (failed.load()) std::rethrow_exception(first_error);

    FreeEnergyEstimate est;
    est.mean = mean_of(logzs);
    est.std_err = n >= 2 ? sample_sd(logzs, est.mean) / std::sqrt(double(n)) : 0.0;
    est.std_err_defined = n >= 2;
    est.n_disorder = n;
    est.n_state_samples = cfg.state_mc ? cfg.state_mc->n_samples : 0;
    est.seed = cfg.seed;
    est.convention = measure.convention;
    est.state_std_err = mean_of(state_errs);
    if (!std::isfinite(est.mean))
        throw std::runtime_error("quenched_free_energy: non-finite mean");
    return est;
}

// log E[e^{H(sigma)}], available when the law declares a sigma-independent
// marginal mgf. Upper-bounds the quenched mean by Jensen.
inline double annealed_bound(const HamiltonianLaw& law) {
    if (!law.has_mgf())
        throw std::invalid_argument(
            "annealed_bound: law has no closed-form marginal mgf; "
            "Monte Carlo annealed estimation is not provided");
    return law.marginal_log_mgf(1.0);
}

} // namespace felab
