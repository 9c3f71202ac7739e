#pragma once

#include <functional>
#include <map>
#include <memory>

#include "felab/quantum/clifford.hpp"
#include "felab/seeding.hpp"

namespace felab::quantum {

// A seeded distribution over Hermitian operators; the quantum counterpart of
// HamiltonianLaw. Samplers are pure in the seed.
struct OperatorLaw {
    Eigen::Index dim = 0;
    std::function<Operator(std::uint64_t)> sample;
    std::string name = "operator_law";
};

inline OperatorLaw zero_operator_law(Eigen::Index dim) {
    OperatorLaw law;
    law.dim = dim;
    law.name = "zero";
    law.sample = [dim](std::uint64_t) { return Operator::Zero(dim, dim); };
    return law;
}

inline OperatorLaw sum_operator_laws(const OperatorLaw& l1, const OperatorLaw& l2) {
    if (l1.dim != l2.dim) throw std::invalid_argument("sum_operator_laws: dimension mismatch");
    OperatorLaw law;
    law.dim = l1.dim;
    law.name = l1.name + "+" + l2.name;
    auto s1 = l1.sample, s2 = l2.sample;
    law.sample = [s1, s2](std::uint64_t seed) {
        return Operator(s1(derive_seed(seed, 0, 0)) + s2(derive_seed(seed, 1, 0)));
    };
    return law;
}

// Quantum SK with Gaussian transverse field on m qubits:
//   M = (beta/sqrt(m)) sum_{1<=i,j<=m} J_ij z_i z_j + h sum_i J_i x_i,
// J over all ordered pairs including i=j (those contribute constants since
// z_i^2 = I). Draw order: the m^2 pair couplings row-major, then the m field
// couplings. Site i reads bit (i-1) of the basis index, as in site_operator.
inline Operator qsk_hamiltonian(int m, double beta, double h, std::uint64_t seed) {
    if (m < 1 || m > 12) throw std::invalid_argument("qsk_hamiltonian: need 1 <= m <= 12");
    Rng rng = make_rng(seed);
    Eigen::MatrixXd j(m, m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) j(i, k) = standard_normal(rng);
    Eigen::VectorXd jf(m);
    for (int i = 0; i < m; ++i) jf[i] = standard_normal(rng);

    const Eigen::Index dim = Eigen::Index(1) << m;
    Operator out = Operator::Zero(dim, dim);
    const double scale = beta / std::sqrt(double(m));
    for (Eigen::Index b = 0; b < dim; ++b) {
        double diag = 0.0;
        for (int i = 0; i < m; ++i) {
            const double si = (b >> i) & 1 ? -1.0 : 1.0;
            for (int k = 0; k < m; ++k) {
                const double sk = (b >> k) & 1 ? -1.0 : 1.0;
                diag += j(i, k) * si * sk;
            }
        }
        out(b, b) = scale * diag;
        for (int i = 0; i < m; ++i) out(b ^ (Eigen::Index(1) << i), b) += h * jf[i];
    }
    return out;
}

inline OperatorLaw qsk_law(int m, double beta, double h) {
    OperatorLaw law;
    law.dim = Eigen::Index(1) << m;
    law.name = "qsk";
    law.sample = [m, beta, h](std::uint64_t seed) { return qsk_hamiltonian(m, beta, h, seed); };
    return law;
}

namespace detail {
// subsets of [n] with |S| = q in ascending bitmask order; this is the
// documented coupling draw order for all monomial Hamiltonians
inline std::vector<std::uint32_t> subsets_of_size(int n, int q) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < (std::uint32_t(1) << n); ++s)
        if (std::popcount(s) == q) out.push_back(s);
    return out;
}

inline Complex i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

// accumulate coeff * M^{chi_S} into out for the left-regular action without
// materializing the monomial matrix
inline void add_left_regular_monomial(Operator& out, std::uint32_t s, Complex coeff) {
    const std::uint32_t dim = std::uint32_t(out.rows());
    for (std::uint32_t t = 0; t < dim; ++t) {
        const int sign = monomial_mul_sign(s, t);
        out(s ^ t, t) += coeff * double(sign);
    }
}
} // namespace detail

// SYK-type Hamiltonian with a mixture of even interaction orders:
//   M = beta * sum_{q in Qs} i^{q/2} sum_{|S|=q} J_S chi_S,  J_S ~ N(0, c_q).
// variances maps q -> c_q; every q must be even.
inline Operator syk_mixture_hamiltonian(const CliffordRep& rep,
                                        const std::map<int, double>& variances, double beta,
                                        std::uint64_t seed) {
    for (const auto& [q, c] : variances) {
        if (q < 2 || q > rep.n || q % 2 != 0)
            throw std::invalid_argument("syk_mixture_hamiltonian: q must be even, 2 <= q <= n");
        if (c < 0) throw std::invalid_argument("syk_mixture_hamiltonian: negative variance");
    }
    Rng rng = make_rng(seed);
    Operator out = Operator::Zero(rep.dim, rep.dim);
    for (const auto& [q, c] : variances) {
        const Complex phase = detail::i_power(q / 2);
        const double sd = std::sqrt(c);
        for (std::uint32_t s : detail::subsets_of_size(rep.n, q)) {
            const double j = sd * standard_normal(rng);
            const Complex coeff = beta * phase * j;
            if (rep.kind == RepKind::left_regular) {
                detail::add_left_regular_monomial(out, s, coeff);
            } else {
                out += coeff * clifford_monomial(rep, s);
            }
        }
    }
    return out;
}

inline Operator syk_hamiltonian(const CliffordRep& rep, int q, double variance, double beta,
                                std::uint64_t seed) {
    return syk_mixture_hamiltonian(rep, {{q, variance}}, beta, seed);
}

// Law over SYK draws; jordan_wigner keeps the dimension at 2^{ceil(n/2)} and
// precomputes the C(n,q) monomial matrices once, left_regular works at 2^n
// through the signed permutation action.
inline OperatorLaw syk_law(int n, int q, double beta, RepKind kind, double variance = 1.0) {
    auto rep = std::make_shared<CliffordRep>(clifford_generators(n, kind));
    OperatorLaw law;
    law.dim = rep->dim;
    law.name = "syk";
    if (kind == RepKind::jordan_wigner) {
        auto subsets = detail::subsets_of_size(n, q);
        auto mats = std::make_shared<std::vector<Operator>>();
        mats->reserve(subsets.size());
        for (std::uint32_t s : subsets) mats->push_back(clifford_monomial(*rep, s));
        const Complex phase = detail::i_power(q / 2);
        const double sd = std::sqrt(variance);
        const Eigen::Index dim = rep->dim;
        law.sample = [mats, phase, sd, beta, dim](std::uint64_t seed) {
            Rng rng = make_rng(seed);
            Operator out = Operator::Zero(dim, dim);
            for (const auto& mat : *mats) out += (beta * phase * sd * standard_normal(rng)) * mat;
            return out;
        };
    } else {
        law.sample = [rep, q, variance, beta](std::uint64_t seed) {
            return syk_hamiltonian(*rep, q, variance, beta, seed);
        };
    }
    return law;
}

// Random operator on the tensor product of Clifford blocks: independent
// Gaussian coefficients on products of per-block even monomials
// prod_j chi^{(j)}_{S_j} with |S_j| = q_j in [Q_j]_2, global phase
// i^{sum q_j / 2}. Per-tuple variance from the map (key = degree tuple),
// else the constant default_variance.
inline Operator mixed_clifford_tensor_hamiltonian(
    const std::vector<int>& block_sizes, const std::vector<int>& degree_caps,
    const std::map<std::vector<int>, double>& variance_map, double default_variance,
    double beta, std::uint64_t seed, RepKind kind = RepKind::jordan_wigner) {
    if (block_sizes.empty() || block_sizes.size() != degree_caps.size())
        throw std::invalid_argument("mixed_clifford_tensor_hamiltonian: bad block spec");
    std::vector<CliffordRep> reps;
    Eigen::Index dim = 1;
    for (int nb : block_sizes) {
        reps.push_back(clifford_generators(nb, kind));
        dim *= reps.back().dim;
        if (dim > 4096) throw std::invalid_argument("mixed_clifford_tensor_hamiltonian: dim > 4096");
    }
    const int m = int(block_sizes.size());

    // enumerate degree tuples (q_1..q_m), each q_j even in [2, Q_j]
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur(m, 2);
    for (;;) {
        bool ok = true;
        for (int j = 0; j < m; ++j)
            if (cur[j] > degree_caps[j] || cur[j] > block_sizes[j]) ok = false;
        if (ok) tuples.push_back(cur);
        int j = m - 1;
        while (j >= 0) {
            cur[j] += 2;
            if (cur[j] <= std::min(degree_caps[j], block_sizes[j])) break;
            cur[j] = 2;
            --j;
        }
        if (j < 0) break;
    }

    Rng rng = make_rng(seed);
    Operator out = Operator::Zero(dim, dim);
    for (const auto& degs : tuples) {
        auto it = variance_map.find(degs);
        const double c = it != variance_map.end() ? it->second : default_variance;
        if (c < 0) throw std::invalid_argument("mixed_clifford_tensor_hamiltonian: negative variance");
        int half_total = 0;
        for (int q : degs) half_total += q / 2;
        const Complex phase = detail::i_power(half_total);
        // odometer over per-block subsets, block-major ascending
        std::vector<std::vector<std::uint32_t>> block_subsets(m);
        for (int j = 0; j < m; ++j)
            block_subsets[j] = detail::subsets_of_size(block_sizes[j], degs[j]);
        std::vector<std::size_t> idx(m, 0);
        const double sd = std::sqrt(c);
        for (;;) {
            Operator term = Operator::Identity(1, 1);
            for (int j = 0; j < m; ++j)
                term = kron(term, clifford_monomial(reps[j], block_subsets[j][idx[j]]));
            out += (beta * phase * sd * standard_normal(rng)) * term;
            int j = m - 1;
            while (j >= 0) {
                if (++idx[j] < block_subsets[j].size()) break;
                idx[j] = 0;
                --j;
            }
            if (j < 0) break;
        }
    }
    return out;
}

} // namespace felab::quantum
