#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "felab/hamiltonian.hpp"
#include "felab/models/mixture.hpp"

namespace felab {

namespace detail {

// Dense order-p coupling tensor over [N]^p, flat in row-major order
// (i1 most significant). Entries are drawn i1,...,ip odometer order.
struct CouplingTensor {
    int p = 0;
    std::int64_t n = 0;
    double scale = 1.0; // N^{-(p-1)/2} premultiplied with beta
    std::vector<double> j;

    double contract(const State& sigma) const {
        if (p == 1) {
            double acc = 0.0;
            for (std::int64_t i = 0; i < n; ++i) acc += j[i] * sigma[i];
            return scale * acc;
        }
        if (p == 2) {
            double acc = 0.0;
            std::size_t t = 0;
            for (std::int64_t i = 0; i < n; ++i) {
                double row = 0.0;
                for (std::int64_t k = 0; k < n; ++k) row += j[t++] * sigma[k];
                acc += sigma[i] * row;
            }
            return scale * acc;
        }
        // general p: odometer over digits with suffix-product updates
        std::vector<int> digit(p, 0);
        std::vector<double> prefix(p + 1, 1.0);
        for (int l = 0; l < p; ++l) prefix[l + 1] = prefix[l] * sigma[0];
        double acc = 0.0;
        const std::size_t total = j.size();
        for (std::size_t t = 0;;) {
            acc += j[t] * prefix[p];
            if (++t == total) break;
            int l = p - 1;
            while (digit[l] == n - 1) { digit[l] = 0; --l; }
            ++digit[l];
            for (int m = l; m < p; ++m) prefix[m + 1] = prefix[m] * sigma[digit[m]];
        }
        return scale * acc;
    }
};

inline void check_tensor_budget(std::int64_t n, int p) {
    double entries = std::pow(double(n), double(p));
    if (entries > double(1) * (1 << 26))
        throw std::invalid_argument("p-spin: coupling tensor of size N^p too large");
}

} // namespace detail

// Gaussian Hamiltonian on a state space with N coordinates:
//   H(sigma) = beta * sum_p N^{-(p-1)/2} sum_{i1..ip} J_{i1..ip} sigma_{i1}..sigma_{ip},
// J i.i.d. N(0, c_p) over all ordered index tuples. Covariance of the
// process is beta^2 N xi(<s1,s2>/N). Draw order per realization: p ascending
// over coefficients with c_p > 0, tuples flat in row-major order.
namespace detail {
inline std::vector<CouplingTensor> sample_pspin_tensors(std::int64_t n, const MixtureXi& xi,
                                                        double beta, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::vector<CouplingTensor> ts;
    for (int p = 1; p <= xi.max_degree(); ++p) {
        if (xi.c[p - 1] == 0.0) continue;
        CouplingTensor t;
        t.p = p;
        t.n = n;
        t.scale = beta * std::pow(double(n), -0.5 * (p - 1));
        std::size_t total = 1;
        for (int l = 0; l < p; ++l) total *= std::size_t(n);
        t.j.resize(total);
        const double sd = std::sqrt(xi.c[p - 1]);
        for (std::size_t i = 0; i < total; ++i) t.j[i] = sd * standard_normal(rng);
        ts.push_back(std::move(t));
    }
    return ts;
}

inline HamiltonianSample tensor_sample(std::vector<CouplingTensor> ts) {
    HamiltonianSample s;
    auto shared = std::make_shared<std::vector<CouplingTensor>>(std::move(ts));
    s.evaluate = [shared](const State& sigma) {
        double acc = 0.0;
        for (const auto& t : *shared) acc += t.contract(sigma);
        return acc;
    };
    return s;
}
} // namespace detail

inline HamiltonianLaw mixed_pspin_law(std::int64_t n, const MixtureXi& xi, double beta = 1.0) {
    if (n < 1) throw std::invalid_argument("mixed_pspin_law: N < 1");
    for (int p = 1; p <= xi.max_degree(); ++p)
        if (xi.c[p - 1] > 0.0) detail::check_tensor_budget(n, p);
    HamiltonianLaw law;
    law.space = StateSpace::hypercube(n);
    law.symmetry = SymmetryTag::z2n;
    law.name = "mixed_pspin";
    law.sample = [n, xi, beta](std::uint64_t seed) {
        return detail::tensor_sample(detail::sample_pspin_tensors(n, xi, beta, seed));
    };
    const double var = beta * beta * double(n) * xi.xi1();
    law.marginal_log_mgf = [var](double t) { return 0.5 * t * t * var; };
    return law;
}

// Spherical sibling of mixed_pspin_law; same Gaussian tensors, states on
// the radius-sqrt(N) sphere, free energies by state Monte Carlo.
inline HamiltonianLaw spherical_pspin_law(std::int64_t n, const MixtureXi& xi, double beta = 1.0) {
    for (int p = 1; p <= xi.max_degree(); ++p)
        if (xi.c[p - 1] > 0.0) detail::check_tensor_budget(n, p);
    HamiltonianLaw law;
    law.space = StateSpace::sphere(n);
    law.symmetry = SymmetryTag::orthogonal;
    law.name = "spherical_pspin";
    law.sample = [n, xi, beta](std::uint64_t seed) {
        return detail::tensor_sample(detail::sample_pspin_tensors(n, xi, beta, seed));
    };
    const double var = beta * beta * double(n) * xi.xi1();
    law.marginal_log_mgf = [var](double t) { return 0.5 * t * t * var; };
    return law;
}

// One sparse coupling-variance entry: variance c >= 0 on the ordered index
// tuple (i_1..i_p), 0-based.
struct VarianceEntry {
    std::vector<std::int32_t> indices;
    double variance = 0.0;
};

// Gaussian Hamiltonian with arbitrary per-tuple variances,
//   H(sigma) = sum_e N^{-(p_e-1)/2} J_e sigma_{i_1}..sigma_{i_p},
// J_e ~ N(0, c_e) independent, drawn in the order the entries are given.
inline HamiltonianLaw general_variance_pspin_law(std::int64_t n, std::vector<VarianceEntry> entries,
                                                 double beta = 1.0) {
    for (const auto& e : entries) {
        if (e.variance < 0) throw std::invalid_argument("general_variance_pspin_law: negative variance");
        if (e.indices.empty()) throw std::invalid_argument("general_variance_pspin_law: empty tuple");
        for (auto i : e.indices)
            if (i < 0 || i >= n) throw std::invalid_argument("general_variance_pspin_law: index out of range");
    }
    HamiltonianLaw law;
    law.space = StateSpace::hypercube(n);
    law.symmetry = SymmetryTag::z2n;
    law.name = "general_pspin";
    std::vector<double> scales(entries.size());
    for (std::size_t e = 0; e < entries.size(); ++e)
        scales[e] = beta * std::pow(double(n), -0.5 * (double(entries[e].indices.size()) - 1));
    auto shared = std::make_shared<std::vector<VarianceEntry>>(std::move(entries));
    auto scale = std::make_shared<std::vector<double>>(std::move(scales));
    law.sample = [shared, scale](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        std::vector<double> j(shared->size());
        for (std::size_t e = 0; e < shared->size(); ++e)
            j[e] = std::sqrt((*shared)[e].variance) * standard_normal(rng);
        HamiltonianSample s;
        auto js = std::make_shared<std::vector<double>>(std::move(j));
        s.evaluate = [shared, scale, js](const State& sigma) {
            double acc = 0.0;
            for (std::size_t e = 0; e < shared->size(); ++e) {
                const auto& ent = (*shared)[e];
                double prod = (*js)[e] * (*scale)[e];
                for (auto i : ent.indices) prod *= sigma[i];
                acc += prod;
            }
            return acc;
        };
        return s;
    };
    double var = 0.0;
    for (const auto& e : *shared)
        var += e.variance * std::pow(double(n), -(double(e.indices.size()) - 1));
    var *= beta * beta;
    law.marginal_log_mgf = [var](double t) { return 0.5 * t * t * var; };
    return law;
}

// Adjacency pattern of the d-dimensional torus with the given side lengths:
// variance 1 on every ordered pair (v, w) with ||v - w|| = 1 (Edwards-Anderson
// coupling pattern).
inline std::vector<VarianceEntry> ea_torus_pattern(const std::vector<std::int64_t>& shape) {
    std::int64_t n = 1;
    for (auto s : shape) {
        if (s < 2) throw std::invalid_argument("ea_torus_pattern: side < 2");
        n *= s;
    }
    auto coords = [&](std::int64_t v) {
        std::vector<std::int64_t> c(shape.size());
        for (std::size_t d = 0; d < shape.size(); ++d) {
            c[d] = v % shape[d];
            v /= shape[d];
        }
        return c;
    };
    auto flat = [&](const std::vector<std::int64_t>& c) {
        std::int64_t v = 0;
        for (std::size_t d = shape.size(); d-- > 0;) v = v * shape[d] + c[d];
        return v;
    };
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::int64_t v = 0; v < n; ++v) {
        auto c = coords(v);
        for (std::size_t d = 0; d < shape.size(); ++d) {
            for (int dir : {-1, 1}) {
                auto cw = c;
                cw[d] = (cw[d] + dir + shape[d]) % shape[d];
                std::int64_t w = flat(cw);
                if (w != v) adj[v][w] = true;
            }
        }
    }
    std::vector<VarianceEntry> entries;
    for (std::int64_t v = 0; v < n; ++v)
        for (std::int64_t w = 0; w < n; ++w)
            if (adj[v][w])
                entries.push_back({{std::int32_t(v), std::int32_t(w)}, 1.0});
    return entries;
}

} // namespace felab
