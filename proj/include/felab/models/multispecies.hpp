#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "felab/models/pspin.hpp"

namespace felab {

// Species-indexed variance pattern: one entry per (p, species tuple). The
// pattern must be symmetric under permutations of the tuple.
struct SpeciesPattern {
    // key: species tuple (0-based, length p); value: variance
    std::map<std::vector<int>, double> variances;

    void validate(int n_species) const {
        for (const auto& [tuple, c] : variances) {
            if (c < 0) throw std::invalid_argument("SpeciesPattern: negative variance");
            if (tuple.empty()) throw std::invalid_argument("SpeciesPattern: empty tuple");
            for (int s : tuple)
                if (s < 0 || s >= n_species)
                    throw std::invalid_argument("SpeciesPattern: species out of range");
            auto sorted = tuple;
            std::sort(sorted.begin(), sorted.end());
            std::vector<int> perm = sorted;
            do {
                auto it = variances.find(perm);
                if (it == variances.end() || it->second != c)
                    throw std::invalid_argument("SpeciesPattern: not permutation-symmetric");
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }

    SpeciesPattern operator+(const SpeciesPattern& o) const {
        SpeciesPattern out = *this;
        for (const auto& [k, v] : o.variances) out.variances[k] += v;
        return out;
    }
};

// Multi-species Gaussian spin glass on a product of spheres: couplings with
// variance c_{s(i_1)..s(i_p)} depending on the species of each index. Tuple
// draw order: patterns iterated in map order, tuples row-major as in the
// single-species law.
inline HamiltonianLaw multispecies_law(const std::vector<std::int64_t>& block_sizes,
                                       const SpeciesPattern& pattern, double beta = 1.0) {
    const int r = static_cast<int>(block_sizes.size());
    pattern.validate(r);
    const std::int64_t n = std::accumulate(block_sizes.begin(), block_sizes.end(), std::int64_t(0));

    // species of each coordinate
    std::vector<int> species(n);
    {
        std::int64_t off = 0;
        for (int s = 0; s < r; ++s)
            for (std::int64_t i = 0; i < block_sizes[s]; ++i) species[off++] = s;
    }
    // group tuples by order p
    std::map<int, std::vector<std::pair<std::vector<int>, double>>> by_p;
    for (const auto& [tuple, c] : pattern.variances)
        by_p[static_cast<int>(tuple.size())].push_back({tuple, c});
    for (const auto& [p, _] : by_p) detail::check_tensor_budget(n, p);

    HamiltonianLaw law;
    law.space = StateSpace::product_of_spheres(block_sizes);
    law.symmetry = SymmetryTag::product_orthogonal;
    law.name = "multispecies";
    auto sp = std::make_shared<std::vector<int>>(std::move(species));
    auto groups = std::make_shared<decltype(by_p)>(std::move(by_p));
    law.sample = [sp, groups, n, beta](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        std::vector<detail::CouplingTensor> ts;
        for (const auto& [p, pats] : *groups) {
            detail::CouplingTensor t;
            t.p = p;
            t.n = n;
            t.scale = beta * std::pow(double(n), -0.5 * (p - 1));
            std::size_t total = 1;
            for (int l = 0; l < p; ++l) total *= std::size_t(n);
            t.j.assign(total, 0.0);
            std::vector<int> digit(p, 0);
            std::vector<int> stuple(p);
            for (std::size_t flat = 0;;) {
                for (int l = 0; l < p; ++l) stuple[l] = (*sp)[digit[l]];
                double c = 0.0;
                for (const auto& [pt, cv] : pats)
                    if (pt == stuple) { c = cv; break; }
                t.j[flat] = c > 0.0 ? std::sqrt(c) * standard_normal(rng) : 0.0;
                if (++flat == total) break;
                int l = p - 1;
                while (digit[l] == n - 1) { digit[l] = 0; --l; }
                ++digit[l];
                for (int m = l + 1; m < p; ++m) digit[m] = 0;
            }
            ts.push_back(std::move(t));
        }
        HamiltonianSample s;
        auto shared = std::make_shared<std::vector<detail::CouplingTensor>>(std::move(ts));
        s.evaluate = [shared](const State& sigma) {
            double acc = 0.0;
            for (const auto& t : *shared) acc += t.contract(sigma);
            return acc;
        };
        return s;
    };
    // Var H(sigma) = sum_p N^{-(p-1)} sum_{species tuple a} c_a prod_l N_{a_l},
    // constant on the product of spheres.
    double var = 0.0;
    for (const auto& [tuple, c] : pattern.variances) {
        double prod = c;
        for (int s : tuple) prod *= double(block_sizes[s]);
        var += prod * std::pow(double(n), -(double(tuple.size()) - 1));
    }
    var *= beta * beta;
    law.marginal_log_mgf = [var](double t) { return 0.5 * t * t * var; };
    return law;
}

// Two-replica law: a single spherical mixed p-spin disorder drives both
// coordinates of a pair (sigma^1, sigma^2) constrained to overlap R*N,
//   Hbar(sigma^1, sigma^2) = H(sigma^1) + H(sigma^2).
inline HamiltonianLaw two_replica_law(std::int64_t n, const MixtureXi& xi, double overlap,
                                      double beta = 1.0) {
    if (!(overlap >= -1.0 && overlap <= 1.0))
        throw std::invalid_argument("two_replica_law: |R| > 1");
    HamiltonianLaw law;
    law.space = StateSpace::paired_sphere(n, overlap);
    law.symmetry = SymmetryTag::orthogonal; // simultaneous O(N) on both replicas
    law.name = "two_replica";
    law.sample = [n, xi, beta](std::uint64_t seed) {
        auto tensors = detail::sample_pspin_tensors(n, xi, beta, seed);
        HamiltonianSample s;
        auto shared = std::make_shared<std::vector<detail::CouplingTensor>>(std::move(tensors));
        s.evaluate = [shared, n](const State& pair) {
            State s1 = pair.head(n);
            State s2 = pair.tail(n);
            double acc = 0.0;
            for (const auto& t : *shared) acc += t.contract(s1) + t.contract(s2);
            return acc;
        };
        return s;
    };
    // Hbar(s1,s2) is Gaussian with variance 2 N xi(1) + 2 N xi(R) beta^2.
    const double var = beta * beta * (2.0 * double(n) * xi.xi1() + 2.0 * double(n) * xi(overlap));
    law.marginal_log_mgf = [var](double t) { return 0.5 * t * t * var; };
    return law;
}

} // namespace felab
