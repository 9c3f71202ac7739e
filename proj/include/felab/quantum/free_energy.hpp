#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>

#include "felab/free_energy.hpp"
#include "felab/quantum/hamiltonians.hpp"
#include "felab/subadditivity.hpp"

namespace felab::quantum {

struct QuantumFreeEnergyEstimate : FreeEnergyEstimate {
    std::uint64_t skipped = 0; // realizations dropped after an eigensolver failure
};

struct QuantumQuenchedConfig {
    std::uint64_t n_disorder = 200;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    int threads = 1;
};

// log Z(M) = logsumexp(spec M) - log dim, the normalized-trace convention.
inline double log_z_of(const Operator& m) {
    Eigen::SelfAdjointEigenSolver<Operator> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("log_z_of: eigensolver failed");
    const auto& ev = es.eigenvalues();
    std::vector<double> evals(ev.data(), ev.data() + ev.size());
    return log_sum_exp(evals) - std::log(double(ev.size()));
}

inline QuantumFreeEnergyEstimate quantum_free_energy(const OperatorLaw& law,
                                                     const QuantumQuenchedConfig& cfg) {
    if (cfg.n_disorder < 1) throw std::invalid_argument("quantum_free_energy: n_disorder < 1");
    if (law.dim > 4096) throw std::invalid_argument("quantum_free_energy: dim > 4096");
    const std::uint64_t n = cfg.n_disorder;
    std::vector<double> logzs(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::uint8_t> ok(n, 0);
    parallel_for_indexed(n, cfg.threads, [&](std::uint64_t r) {
        try {
            Operator m = law.sample(derive_seed(cfg.seed, cfg.stream, r));
            logzs[r] = log_z_of(m);
            ok[r] = 1;
        } catch (const std::runtime_error&) {
            ok[r] = 0; // eigensolver failure: skip and report
        }
    });
    std::vector<double> kept;
    kept.reserve(n);
    for (std::uint64_t r = 0; r < n; ++r)
        if (ok[r]) kept.push_back(logzs[r]);
    if (kept.empty()) throw std::runtime_error("quantum_free_energy: every realization failed");

    QuantumFreeEnergyEstimate est;
    est.mean = mean_of(kept);
    est.std_err = kept.size() >= 2 ? sample_sd(kept, est.mean) / std::sqrt(double(kept.size())) : 0.0;
    est.std_err_defined = kept.size() >= 2;
    est.n_disorder = kept.size();
    est.n_state_samples = 0;
    est.seed = cfg.seed;
    est.convention = Convention::probability;
    est.skipped = n - kept.size();
    return est;
}

struct GoldenThompsonGap {
    double lhs = 0.0; // Tr e^{M1+M2}
    double rhs = 0.0; // Tr(e^{M1} e^{M2})
    double gap = 0.0; // rhs - lhs, nonnegative up to roundoff
};

// Both traces evaluated through Hermitian eigendecompositions with the
// spectra shifted by their maxima; the shift multiplies both sides by the
// same factor and is undone at the end (in log space this is exact).
inline GoldenThompsonGap golden_thompson_gap(const Operator& m1, const Operator& m2) {
    if (m1.rows() != m2.rows()) throw std::invalid_argument("golden_thompson_gap: dim mismatch");
    require_hermitian(m1, 1e-9);
    require_hermitian(m2, 1e-9);
    Eigen::SelfAdjointEigenSolver<Operator> e1(m1), e2(m2), e12(m1 + m2);
    if (e1.info() != Eigen::Success || e2.info() != Eigen::Success || e12.info() != Eigen::Success)
        throw std::runtime_error("golden_thompson_gap: eigensolver failed");
    const double a = e1.eigenvalues().maxCoeff();
    const double b = e2.eigenvalues().maxCoeff();

    double lhs = 0.0;
    for (Eigen::Index i = 0; i < e12.eigenvalues().size(); ++i)
        lhs += std::exp(e12.eigenvalues()(i) - a - b);
    // Tr(e^{M1} e^{M2}) = sum_ij e^{l1_i} e^{l2_j} |<u1_i, u2_j>|^2
    Operator overlap = e1.eigenvectors().adjoint() * e2.eigenvectors();
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < overlap.rows(); ++i)
        for (Eigen::Index j = 0; j < overlap.cols(); ++j)
            rhs += std::exp(e1.eigenvalues()(i) - a) * std::exp(e2.eigenvalues()(j) - b) *
                   std::norm(overlap(i, j));

    const double scale = std::exp(a + b);
    GoldenThompsonGap out{lhs * scale, rhs * scale, (rhs - lhs) * scale};
    if (out.gap < -1e-9 * std::abs(out.rhs))
        throw std::runtime_error("golden_thompson_gap: inequality violated beyond tolerance");
    return out;
}

// Exact conjugation average over the local Pauli group, factor by factor:
// each factor contributes (M + x M x + y M y + z M z)/4, which kills every
// non-identity Pauli on that site.
inline Operator symmetrizer_average_qsk_local(const Operator& m, int n_sites) {
    if (m.rows() != (Eigen::Index(1) << n_sites))
        throw std::invalid_argument("symmetrizer_average_qsk_local: dimension mismatch");
    Operator acc = m;
    for (int i = 1; i <= n_sites; ++i) {
        const Operator x = site_operator(n_sites, i, 'x');
        const Operator y = site_operator(n_sites, i, 'y');
        const Operator z = site_operator(n_sites, i, 'z');
        acc = (acc + x * acc * x + y * acc * y + z * acc * z) / 4.0;
    }
    return acc;
}

// Exact conjugation average over the 2^n monomials of a Clifford rep;
// chi_S^{-1} = +-chi_S, so each term is sign * chi_S M chi_S.
inline Operator symmetrizer_average_syk(const Operator& m, const CliffordRep& rep) {
    if (m.rows() != rep.dim) throw std::invalid_argument("symmetrizer_average_syk: dimension mismatch");
    Operator acc = Operator::Zero(rep.dim, rep.dim);
    const std::uint32_t total = std::uint32_t(1) << rep.n;
    for (std::uint32_t s = 0; s < total; ++s) {
        Operator g = clifford_monomial(rep, s);
        acc += double(monomial_square_sign(s)) * (g * m * g);
    }
    return acc / double(total);
}

// Monte Carlo conjugation average over signed permutation matrices
// (g = P D: coordinate permutation and sign flips).
inline Operator symmetrizer_average_signed_permutations(const Operator& m, std::uint64_t n_samples,
                                                        std::uint64_t seed) {
    const Eigen::Index n = m.rows();
    Operator acc = Operator::Zero(n, n);
    Rng rng = make_rng(seed);
    std::vector<Eigen::Index> perm(n);
    std::vector<double> sign(n);
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) perm[i] = i;
        for (Eigen::Index i = n - 1; i > 0; --i) {
            std::uniform_int_distribution<Eigen::Index> u(0, i);
            std::swap(perm[i], perm[u(rng)]);
        }
        for (Eigen::Index i = 0; i < n; ++i) sign[i] = (rng() & 1u) ? -1.0 : 1.0;
        // (g M g^{-1})_{p(i), p(j)} = s_i s_j M_{ij}
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                acc(perm[i], perm[j]) += sign[i] * sign[j] * m(i, j);
    }
    return acc / double(n_samples);
}

// Coupled three-way estimator, as in the classical report: realization r
// draws M1 (stream 1) and M2 (stream 2) once and diagonalizes M1, M2, M1+M2.
inline SubadditivityReport quantum_subadditivity_report(const OperatorLaw& l1,
                                                        const OperatorLaw& l2,
                                                        const SubadditivityConfig& cfg) {
    if (l1.dim != l2.dim)
        throw std::invalid_argument("quantum_subadditivity_report: dimension mismatch");
    const std::uint64_t n = cfg.n_disorder;
    if (n < 1) throw std::invalid_argument("quantum_subadditivity_report: n_disorder < 1");
    std::vector<double> z1(n), z2(n), z12(n);
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    parallel_for_indexed(n, cfg.threads, [&](std::uint64_t r) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            Operator m1 = l1.sample(derive_seed(cfg.seed, 1, r));
            Operator m2 = l2.sample(derive_seed(cfg.seed, 2, r));
            z1[r] = log_z_of(m1);
            z2[r] = log_z_of(m2);
            z12[r] = log_z_of(m1 + m2);
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
        est.seed = cfg.seed;
        est.convention = Convention::probability;
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

} // namespace felab::quantum
