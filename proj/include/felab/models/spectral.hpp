#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "felab/hamiltonian.hpp"

namespace felab {

// Compactly supported spectral distribution for the diagonal entries of
// Lambda in the rotationally invariant ensemble A = O Lambda O^T.
struct SpectralLaw {
    enum class Kind { semicircle, two_atoms, uniform, empirical, point_mass };
    Kind kind = Kind::semicircle;
    double a = 1.0, b = 0.0; // semicircle: a=var; two_atoms: +-a; uniform: [a,b]; point: a
    std::shared_ptr<std::vector<double>> atoms; // empirical

    static SpectralLaw semicircle(double var) {
        if (var <= 0) throw std::invalid_argument("semicircle: var <= 0");
        return {Kind::semicircle, var, 0.0, nullptr};
    }
    static SpectralLaw two_atoms(double a) { return {Kind::two_atoms, a, 0.0, nullptr}; }
    static SpectralLaw uniform(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("SpectralLaw::uniform: lo >= hi");
        return {Kind::uniform, lo, hi, nullptr};
    }
    static SpectralLaw point_mass(double v) { return {Kind::point_mass, v, 0.0, nullptr}; }
    static SpectralLaw empirical(std::vector<double> samples) {
        if (samples.empty()) throw std::invalid_argument("SpectralLaw::empirical: empty");
        std::sort(samples.begin(), samples.end());
        SpectralLaw law{Kind::empirical, 0.0, 0.0, nullptr};
        law.atoms = std::make_shared<std::vector<double>>(std::move(samples));
        return law;
    }

    double support_bound() const {
        switch (kind) {
        case Kind::semicircle: return 2.0 * std::sqrt(a);
        case Kind::two_atoms: return std::abs(a);
        case Kind::uniform: return std::max(std::abs(a), std::abs(b));
        case Kind::point_mass: return std::abs(a);
        case Kind::empirical:
            return std::max(std::abs(atoms->front()), std::abs(atoms->back()));
        }
        return 0.0;
    }

    double sample(Rng& rng) const {
        switch (kind) {
        case Kind::semicircle: {
            // rejection from the enclosing uniform box, acceptance rate pi/4
            const double r = 2.0 * std::sqrt(a);
            for (;;) {
                const double x = r * (2.0 * uniform_unit(rng) - 1.0);
                const double u = uniform_unit(rng);
                if (u * u <= 1.0 - (x * x) / (r * r)) return x;
            }
        }
        case Kind::two_atoms: return (rng() & 1u) ? a : -a;
        case Kind::uniform: return a + (b - a) * uniform_unit(rng);
        case Kind::point_mass: return a;
        case Kind::empirical: {
            std::uniform_int_distribution<std::size_t> u(0, atoms->size() - 1);
            return (*atoms)[u(rng)];
        }
        }
        throw std::logic_error("SpectralLaw::sample");
    }

    // Exact CDF for the analytic kinds (used by KS checks).
    double cdf(double x) const {
        switch (kind) {
        case Kind::semicircle: {
            const double r = 2.0 * std::sqrt(a);
            if (x <= -r) return 0.0;
            if (x >= r) return 1.0;
            const double t = x / r;
            return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / M_PI;
        }
        case Kind::two_atoms:
            if (x < -std::abs(a)) return 0.0;
            if (x < std::abs(a)) return 0.5;
            return 1.0;
        case Kind::uniform:
            return std::clamp((x - a) / (b - a), 0.0, 1.0);
        case Kind::point_mass: return x >= a ? 1.0 : 0.0;
        case Kind::empirical: {
            auto it = std::upper_bound(atoms->begin(), atoms->end(), x);
            return double(it - atoms->begin()) / double(atoms->size());
        }
        }
        throw std::logic_error("SpectralLaw::cdf");
    }
};

// Haar-distributed orthogonal matrix: QR of an i.i.d. standard Gaussian
// matrix with the sign convention that makes R's diagonal positive.
inline Eigen::MatrixXd haar_orthogonal(std::int64_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("haar_orthogonal: N < 1");
    Eigen::MatrixXd g(n, n);
    for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t i = 0; i < n; ++i) g(i, j) = standard_normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::int64_t j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

inline Eigen::MatrixXd haar_orthogonal(std::int64_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return haar_orthogonal(n, rng);
}

// Orthogonally invariant SK Hamiltonian on the hypercube:
//   H(sigma) = beta <sigma, A sigma>,  A = O Lambda O^T,
// Lambda i.i.d. from the spectral law, O Haar. Draw order per realization:
// the N Lambda entries, then the N^2 Gaussians behind the Haar matrix.
inline HamiltonianLaw orth_inv_sk_law(std::int64_t n, const SpectralLaw& nu, double beta = 1.0) {
    if (n < 1 || n > 14) throw std::invalid_argument("orth_inv_sk_law: need 1 <= N <= 14");
    HamiltonianLaw law;
    law.space = StateSpace::hypercube(n);
    law.symmetry = SymmetryTag::z2n; // the law is O(N)-invariant, in particular Z2^N-invariant
    law.name = "orth_inv_sk";
    law.sample = [n, nu, beta](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        Eigen::VectorXd lambda(n);
        for (std::int64_t i = 0; i < n; ++i) lambda[i] = nu.sample(rng);
        Eigen::MatrixXd o = haar_orthogonal(n, rng);
        Eigen::MatrixXd a = o * lambda.asDiagonal() * o.transpose();
        HamiltonianSample s;
        auto shared = std::make_shared<Eigen::MatrixXd>(std::move(a));
        s.evaluate = [shared, beta](const State& sigma) {
            return beta * sigma.dot((*shared) * sigma);
        };
        return s;
    };
    return law;
}

// Numerical proxy for the additive free convolution nu1 [+] nu2: the
// empirical spectrum of O1 L1 O1^T + O2 L2 O2^T at dimension n_spec,
// returned as an empirical spectral law for i.i.d. resampling.
inline SpectralLaw empirical_free_convolution(const SpectralLaw& nu1, const SpectralLaw& nu2,
                                              std::int64_t n_spec, std::uint64_t seed) {
    if (n_spec < 256) throw std::invalid_argument("empirical_free_convolution: N_spec < 256");
    Rng rng = make_rng(seed);
    Eigen::VectorXd l1(n_spec), l2(n_spec);
    for (std::int64_t i = 0; i < n_spec; ++i) l1[i] = nu1.sample(rng);
    for (std::int64_t i = 0; i < n_spec; ++i) l2[i] = nu2.sample(rng);
    Eigen::MatrixXd o1 = haar_orthogonal(n_spec, rng);
    Eigen::MatrixXd o2 = haar_orthogonal(n_spec, rng);
    Eigen::MatrixXd sum = o1 * l1.asDiagonal() * o1.transpose() +
                          o2 * l2.asDiagonal() * o2.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sum, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("empirical_free_convolution: eigensolver failed");
    std::vector<double> eigs(es.eigenvalues().data(), es.eigenvalues().data() + n_spec);
    return SpectralLaw::empirical(std::move(eigs));
}

} // namespace felab
