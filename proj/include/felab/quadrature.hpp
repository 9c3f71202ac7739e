#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace felab {

// Gauss-Hermite rule for \int f(z) e^{-z^2} dz, computed by Golub-Welsch
// (eigen-decomposition of the Jacobi matrix). Rules are cached per node count.
struct GaussHermiteRule {
    std::vector<double> nodes;   // roots of H_n
    std::vector<double> weights; // sum of weights = sqrt(pi)
};

inline const GaussHermiteRule& gauss_hermite(int n) {
    if (n < 1 || n > 1024) throw std::invalid_argument("gauss_hermite: bad node count");
    static std::mutex mu;
    static std::map<int, GaussHermiteRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = std::sqrt(i / 2.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss_hermite: eigensolver failed");

    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double sqrt_pi = std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = sqrt_pi * v0 * v0;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

// E[f(Z)] for Z ~ N(0,1): substitute z = sqrt(2) u in the e^{-u^2} rule.
template <class F>
double gauss_hermite_expectation(F&& f, int n_nodes = 64) {
    const auto& rule = gauss_hermite(n_nodes);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(std::sqrt(2.0) * rule.nodes[i]);
    return acc * inv_sqrt_pi;
}

} // namespace felab
