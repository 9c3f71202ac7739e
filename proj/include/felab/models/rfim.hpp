#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "felab/models/increments.hpp"
#include "felab/models/spectral.hpp"

namespace felab {

// Random field Ising model on a torus lattice, split into its two
// independent parts: the sign-invariant random field
//   H1(sigma) = beta sum_v h_v sigma_v
// and the deterministic ferromagnet
//   H2(sigma) = beta J0 sum_{(v,w): ||v-w||=1} sigma_v sigma_w
// (unordered nearest-neighbor pairs, periodic boundary). Only H1 is
// Z2^V-invariant, which is all the subadditivity bound needs.
struct RfimLaw {
    HamiltonianLaw field;
    HamiltonianLaw ising;
    HamiltonianLaw total;
};

inline std::vector<std::pair<std::int32_t, std::int32_t>>
torus_edges(const std::vector<std::int64_t>& shape) {
    std::int64_t n = 1;
    for (auto s : shape) {
        if (s < 2) throw std::invalid_argument("torus_edges: side < 2");
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
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    for (std::int64_t v = 0; v < n; ++v) {
        auto c = coords(v);
        for (std::size_t d = 0; d < shape.size(); ++d) {
            auto cw = c;
            cw[d] = (cw[d] + 1) % shape[d];
            const std::int64_t w = flat(cw);
            if (w == v) continue;
            const std::pair<std::int32_t, std::int32_t> e{std::int32_t(std::min(v, w)),
                                                          std::int32_t(std::max(v, w))};
            if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
        }
    }
    return edges;
}

inline RfimLaw rfim_law(const std::vector<std::int64_t>& shape, const IncrementLaw& h_law,
                        double j0, double beta = 1.0) {
    if (!h_law.sign_symmetric())
        throw std::invalid_argument("rfim_law: field law must be negation-invariant");
    std::int64_t n = 1;
    for (auto s : shape) n *= s;
    if (n > 22) throw std::invalid_argument("rfim_law: |V| > 22");
    StateSpace space = StateSpace::hypercube(n);

    HamiltonianLaw field;
    field.space = space;
    field.symmetry = SymmetryTag::z2n;
    field.name = "rfim_field";
    field.sample = [n, h_law, beta](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        auto h = std::make_shared<std::vector<double>>(n);
        for (std::int64_t v = 0; v < n; ++v) (*h)[v] = h_law.sample(rng);
        HamiltonianSample s;
        s.evaluate = [h, beta](const State& sigma) {
            double acc = 0.0;
            for (Eigen::Index v = 0; v < sigma.size(); ++v) acc += (*h)[v] * sigma[v];
            return beta * acc;
        };
        return s;
    };
    field.marginal_log_mgf = [n, h_law, beta](double t) {
        // h sign-symmetric, so logmgf(t*beta*sigma_v) = logmgf(t*beta)
        return double(n) * h_law.log_mgf(t * beta);
    };

    HamiltonianLaw ising;
    ising.space = space;
    ising.symmetry = SymmetryTag::none; // deterministic, not sign-invariant
    ising.name = "ising_ferro";
    auto edges = std::make_shared<std::vector<std::pair<std::int32_t, std::int32_t>>>(torus_edges(shape));
    ising.sample = [edges, j0, beta](std::uint64_t) {
        HamiltonianSample s;
        s.evaluate = [edges, j0, beta](const State& sigma) {
            double acc = 0.0;
            for (const auto& [v, w] : *edges) acc += sigma[v] * sigma[w];
            return beta * j0 * acc;
        };
        return s;
    };

    RfimLaw out;
    out.field = std::move(field);
    out.ising = std::move(ising);
    out.total = sum_laws(out.field, out.ising);
    out.total.name = "rfim";
    return out;
}

// Spiked matrix Hamiltonian H(sigma) = beta (<sigma, A sigma> + snr <sigma, v>^2).
// Noise is GOE-normalized (A_ij ~ N(0, 1/N) off-diagonal, N(0, 2/N) diagonal)
// or an orthogonally invariant ensemble; the spike v is uniform on the cube
// or the radius-sqrt(N) sphere. Both built-in factors are invariant under the
// space's sign flips (cube) or rotations (sphere), so the tag follows the space.
struct SpikedConfig {
    enum class Noise { gaussian_goe, orth_inv, none };
    enum class Spike { uniform_cube, uniform_sphere, none };
    Noise noise = Noise::gaussian_goe;
    Spike spike = Spike::uniform_cube;
    SpectralLaw noise_spectrum = SpectralLaw::semicircle(1.0); // orth_inv only
    double snr = 1.0;
    bool sphere_states = false;
};

inline HamiltonianLaw spiked_matrix_law(std::int64_t n, const SpikedConfig& cfg, double beta = 1.0) {
    if (n < 1 || n > 14) throw std::invalid_argument("spiked_matrix_law: need 1 <= N <= 14");
    HamiltonianLaw law;
    law.space = cfg.sphere_states ? StateSpace::sphere(n) : StateSpace::hypercube(n);
    law.symmetry = cfg.sphere_states ? SymmetryTag::orthogonal : SymmetryTag::z2n;
    law.name = "spiked_matrix";
    law.sample = [n, cfg, beta](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        if (cfg.noise == SpikedConfig::Noise::gaussian_goe) {
            for (std::int64_t i = 0; i < n; ++i) {
                a(i, i) = std::sqrt(2.0 / double(n)) * standard_normal(rng);
                for (std::int64_t j = i + 1; j < n; ++j) {
                    a(i, j) = std::sqrt(1.0 / double(n)) * standard_normal(rng);
                    a(j, i) = a(i, j);
                }
            }
        } else if (cfg.noise == SpikedConfig::Noise::orth_inv) {
            Eigen::VectorXd lambda(n);
            for (std::int64_t i = 0; i < n; ++i) lambda[i] = cfg.noise_spectrum.sample(rng);
            Eigen::MatrixXd o = haar_orthogonal(n, rng);
            a = o * lambda.asDiagonal() * o.transpose();
        }
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        if (cfg.spike == SpikedConfig::Spike::uniform_cube) {
            for (std::int64_t i = 0; i < n; ++i) v[i] = (rng() & 1u) ? -1.0 : 1.0;
        } else if (cfg.spike == SpikedConfig::Spike::uniform_sphere) {
            for (std::int64_t i = 0; i < n; ++i) v[i] = standard_normal(rng);
            v *= std::sqrt(double(n)) / v.norm();
        }
        HamiltonianSample s;
        auto am = std::make_shared<Eigen::MatrixXd>(std::move(a));
        auto vm = std::make_shared<Eigen::VectorXd>(std::move(v));
        const double snr = cfg.snr;
        s.evaluate = [am, vm, snr, beta](const State& sigma) {
            const double quad = sigma.dot((*am) * sigma);
            const double d = vm->dot(sigma);
            return beta * (quad + snr * d * d);
        };
        return s;
    };
    return law;
}

} // namespace felab
