#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "felab/hamiltonian.hpp"
#include "felab/quadrature.hpp"

namespace felab {

// Random constraint satisfaction ensemble: M clauses, each a non-negative
// penalty theta on k literals with i.i.d. uniform variable indices and
// i.i.d. uniform per-literal negations. The random negations make the clause
// law invariant under global sign flips.
struct ClauseModel {
    enum class Type { ksat, nae_ksat, custom };
    enum class MMode { fixed, poisson };

    int k = 3;
    double alpha = 1.0;
    Type type = Type::ksat;
    MMode m_mode = MMode::fixed;
    std::vector<double> theta_table; // custom: 2^k values >= 0, index bit l = literal l true

    static ClauseModel ksat(int k, double alpha, MMode mode = MMode::fixed) {
        if (k < 1) throw std::invalid_argument("ksat: k < 1");
        if (alpha < 0) throw std::invalid_argument("ksat: alpha < 0");
        return {k, alpha, Type::ksat, mode, {}};
    }
    static ClauseModel nae_ksat(int k, double alpha, MMode mode = MMode::fixed) {
        auto m = ksat(k, alpha, mode);
        m.type = Type::nae_ksat;
        return m;
    }
    static ClauseModel custom(int k, double alpha, std::vector<double> table,
                              MMode mode = MMode::fixed) {
        if (table.size() != (std::size_t(1) << k))
            throw std::invalid_argument("custom clause: table size != 2^k");
        for (double v : table)
            if (v < 0) throw std::invalid_argument("custom clause: theta < 0");
        auto m = ksat(k, alpha, mode);
        m.type = Type::custom;
        m.theta_table = std::move(table);
        return m;
    }

    // theta evaluated on the literal-truth bitmask (bit l set = literal l true).
    double theta(std::uint32_t truth_mask) const {
        switch (type) {
        case Type::ksat: return truth_mask == 0 ? 1.0 : 0.0;
        case Type::nae_ksat: {
            const std::uint32_t all = (std::uint32_t(1) << k) - 1;
            return (truth_mask == 0 || truth_mask == all) ? 1.0 : 0.0;
        }
        case Type::custom: return theta_table[truth_mask];
        }
        return 0.0;
    }

    // E over a uniform truth assignment of e^{-t * theta}; the per-clause
    // marginal mgf of -theta at any fixed sigma.
    double clause_log_mgf_neg(double t) const {
        const std::size_t total = std::size_t(1) << k;
        double acc = 0.0;
        for (std::size_t m = 0; m < total; ++m) acc += std::exp(-t * theta(std::uint32_t(m)));
        return std::log(acc / double(total));
    }
};

struct Clause {
    std::vector<std::int32_t> idx; // variable of literal l
    std::vector<std::int8_t> neg;  // +1: literal true iff sigma=+1; -1: flipped
};

// H(sigma) = -beta sum_j theta_j(sigma), Poisson clause counts capped at
// 10*alpha*N (the truncation probability at desk scale is negligible and the
// cap is reported through the mgf staying the untruncated formula).
inline HamiltonianLaw csp_law(std::int64_t n, const ClauseModel& model, double beta = 1.0) {
    if (n < 1 || n > 22) throw std::invalid_argument("csp_law: need 1 <= N <= 22");
    if (model.k > n) throw std::invalid_argument("csp_law: k > N");
    HamiltonianLaw law;
    law.space = StateSpace::hypercube(n);
    law.symmetry = SymmetryTag::z2n;
    law.name = model.type == ClauseModel::Type::ksat ? "ksat"
             : model.type == ClauseModel::Type::nae_ksat ? "nae_ksat" : "csp_custom";
    law.sample = [n, model, beta](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        const double lambda = model.alpha * double(n);
        std::uint64_t m_clauses;
        if (model.m_mode == ClauseModel::MMode::fixed) {
            m_clauses = std::uint64_t(std::llround(lambda));
        } else {
            std::poisson_distribution<std::uint64_t> pois(lambda);
            m_clauses = std::min<std::uint64_t>(pois(rng), std::uint64_t(10.0 * lambda) + 1);
        }
        std::vector<Clause> clauses(m_clauses);
        std::uniform_int_distribution<std::int32_t> var(0, std::int32_t(n) - 1);
        for (auto& c : clauses) {
            c.idx.resize(model.k);
            c.neg.resize(model.k);
            for (int l = 0; l < model.k; ++l) {
                c.idx[l] = var(rng);
                c.neg[l] = (rng() & 1u) ? std::int8_t(1) : std::int8_t(-1);
            }
        }
        HamiltonianSample s;
        auto shared = std::make_shared<std::vector<Clause>>(std::move(clauses));
        s.evaluate = [shared, model, beta](const State& sigma) {
            double acc = 0.0;
            for (const auto& c : *shared) {
                std::uint32_t truth = 0;
                for (int l = 0; l < model.k; ++l)
                    if (sigma[c.idx[l]] * c.neg[l] > 0) truth |= (std::uint32_t(1) << l);
                acc += model.theta(truth);
            }
            return -beta * acc;
        };
        return s;
    };
    const double lambda = model.alpha * double(n);
    if (model.m_mode == ClauseModel::MMode::fixed) {
        const std::uint64_t m = std::uint64_t(std::llround(lambda));
        law.marginal_log_mgf = [model, beta, m](double t) {
            return double(m) * model.clause_log_mgf_neg(t * beta);
        };
    } else {
        law.marginal_log_mgf = [model, beta, lambda](double t) {
            return lambda * std::expm1(model.clause_log_mgf_neg(t * beta));
        };
    }
    return law;
}

// Ising perceptron: H(sigma) = -beta sum_{j<=M} phi(<g_j, sigma>) with
// g_j ~ N(0, I_N) and M = round(alpha N). phi >= 0 is spot-checked at
// construction on Gaussian inputs. spherical=true moves the states to the
// radius-sqrt(N) sphere (free energy by state MC).
inline HamiltonianLaw perceptron_law(std::int64_t n, double alpha,
                                     std::function<double(double)> phi, double beta = 1.0,
                                     bool spherical = false) {
    if (n < 1 || alpha < 0) throw std::invalid_argument("perceptron_law: bad N or alpha");
    {
        Rng probe = make_rng(0xfe1abUL);
        for (int i = 0; i < 64; ++i) {
            const double v = phi(std::sqrt(double(n)) * standard_normal(probe));
            if (!(v >= 0.0)) throw std::invalid_argument("perceptron_law: phi must be >= 0");
        }
    }
    const std::uint64_t m = std::uint64_t(std::llround(alpha * double(n)));
    HamiltonianLaw law;
    law.space = spherical ? StateSpace::sphere(n) : StateSpace::hypercube(n);
    law.symmetry = spherical ? SymmetryTag::orthogonal : SymmetryTag::z2n;
    law.name = spherical ? "perceptron_sphere" : "perceptron";
    law.sample = [n, m, phi, beta](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        Eigen::MatrixXd g(m, n);
        for (std::uint64_t j = 0; j < m; ++j)
            for (std::int64_t i = 0; i < n; ++i) g(j, i) = standard_normal(rng);
        HamiltonianSample s;
        auto shared = std::make_shared<Eigen::MatrixXd>(std::move(g));
        s.evaluate = [shared, phi, beta](const State& sigma) {
            Eigen::VectorXd dots = (*shared) * sigma;
            double acc = 0.0;
            for (Eigen::Index j = 0; j < dots.size(); ++j) acc += phi(dots[j]);
            return -beta * acc;
        };
        return s;
    };
    // <g, sigma> ~ N(0, N) on both the cube and the sphere
    const double sd = std::sqrt(double(n));
    law.marginal_log_mgf = [m, phi, beta, sd](double t) {
        const double per_clause = gauss_hermite_expectation(
            [&](double z) { return std::exp(-t * beta * phi(sd * z)); }, 96);
        return double(m) * std::log(per_clause);
    };
    return law;
}

} // namespace felab
