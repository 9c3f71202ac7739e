#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "felab/seeding.hpp"

namespace felab {

// A point of a state space, encoded as a dense vector:
//   hypercube(N)          N entries in {-1,+1}
//   sphere(N)             N coordinates, |sigma|^2 = N
//   product_of_spheres    blocks of N_1..N_r coordinates, |block i|^2 = N_i
//   paired_sphere(N,R)    2N coordinates: sigma^1 then sigma^2
//   tree_leaves(d,depth)  one entry, the leaf index
//   finite_set(size)      one entry, the state index
using State = Eigen::VectorXd;

struct StateSpace {
    enum class Kind { hypercube, sphere, product_of_spheres, tree_leaves, paired_sphere, finite_set };

    Kind kind = Kind::hypercube;
    std::vector<std::int64_t> dims; // hypercube/sphere/paired:{N}; product:{N_1..N_r}; tree:{d,depth}; finite:{size}
    double overlap = 0.0;           // paired_sphere only, R in [-1,1]

    static StateSpace hypercube(std::int64_t n) {
        if (n < 1 || n > 24) throw std::invalid_argument("hypercube: N out of range");
        return {Kind::hypercube, {n}, 0.0};
    }
    static StateSpace sphere(std::int64_t n) {
        if (n < 1) throw std::invalid_argument("sphere: N < 1");
        return {Kind::sphere, {n}, 0.0};
    }
    static StateSpace product_of_spheres(std::vector<std::int64_t> ns) {
        if (ns.empty()) throw std::invalid_argument("product_of_spheres: empty");
        for (auto n : ns)
            if (n < 1) throw std::invalid_argument("product_of_spheres: N_i < 1");
        return {Kind::product_of_spheres, std::move(ns), 0.0};
    }
    static StateSpace tree_leaves(std::int64_t d, std::int64_t depth) {
        if (d < 2 || depth < 1) throw std::invalid_argument("tree_leaves: need d >= 2, depth >= 1");
        double leaves = std::pow(double(d), double(depth));
        if (leaves > double(1 << 22)) throw std::invalid_argument("tree_leaves: d^depth > 2^22");
        return {Kind::tree_leaves, {d, depth}, 0.0};
    }
    static StateSpace paired_sphere(std::int64_t n, double r) {
        if (n < 2) throw std::invalid_argument("paired_sphere: N < 2");
        if (!(r >= -1.0 && r <= 1.0)) throw std::invalid_argument("paired_sphere: |R| > 1");
        return {Kind::paired_sphere, {n}, r};
    }
    static StateSpace finite_set(std::int64_t size) {
        if (size < 1 || size > (1LL << 24)) throw std::invalid_argument("finite_set: size out of range");
        return {Kind::finite_set, {size}, 0.0};
    }

    bool operator==(const StateSpace& o) const {
        return kind == o.kind && dims == o.dims && overlap == o.overlap;
    }

    bool enumerable() const {
        return kind == Kind::hypercube || kind == Kind::finite_set || kind == Kind::tree_leaves;
    }

    // Number of states of an enumerable space.
    std::uint64_t size() const {
        switch (kind) {
        case Kind::hypercube: return std::uint64_t(1) << dims[0];
        case Kind::finite_set: return std::uint64_t(dims[0]);
        case Kind::tree_leaves: {
            std::uint64_t s = 1;
            for (std::int64_t i = 0; i < dims[1]; ++i) s *= std::uint64_t(dims[0]);
            return s;
        }
        default: throw std::logic_error("size: space not enumerable");
        }
    }

    double log_cardinality() const {
        switch (kind) {
        case Kind::hypercube: return dims[0] * std::log(2.0);
        case Kind::finite_set: return std::log(double(dims[0]));
        case Kind::tree_leaves: return dims[1] * std::log(double(dims[0]));
        default: throw std::logic_error("log_cardinality: space not enumerable");
        }
    }

    // Length of the State vector.
    std::int64_t ambient_dim() const {
        switch (kind) {
        case Kind::hypercube:
        case Kind::sphere: return dims[0];
        case Kind::product_of_spheres:
            return std::accumulate(dims.begin(), dims.end(), std::int64_t(0));
        case Kind::paired_sphere: return 2 * dims[0];
        case Kind::tree_leaves:
        case Kind::finite_set: return 1;
        }
        throw std::logic_error("ambient_dim: bad kind");
    }

    // Enumeration order, fixed and documented:
    //   hypercube: state index i in [0, 2^N); sigma_j = +1 when bit j of i
    //     is 0, -1 when set (bit 0 = coordinate 0; index 0 = all +1).
    //   tree_leaves: leaf index in [0, d^depth); digit at level l (most
    //     significant first) is the child picked at depth l.
    //   finite_set: the index itself.
    void materialize(std::uint64_t index, State& out) const {
        switch (kind) {
        case Kind::hypercube: {
            const std::int64_t n = dims[0];
            out.resize(n);
            for (std::int64_t j = 0; j < n; ++j)
                out[j] = ((index >> j) & 1u) ? -1.0 : 1.0;
            return;
        }
        case Kind::tree_leaves:
        case Kind::finite_set:
            out.resize(1);
            out[0] = double(index);
            return;
        default: throw std::logic_error("materialize: space not enumerable");
        }
    }

    State materialize(std::uint64_t index) const {
        State s;
        materialize(index, s);
        return s;
    }

    // One draw from the invariant reference measure.
    State sample_state(Rng& rng) const {
        switch (kind) {
        case Kind::hypercube: {
            State s(dims[0]);
            for (std::int64_t j = 0; j < dims[0]; ++j)
                s[j] = (rng() & 1u) ? -1.0 : 1.0;
            return s;
        }
        case Kind::finite_set:
        case Kind::tree_leaves: {
            std::uniform_int_distribution<std::uint64_t> u(0, size() - 1);
            State s(1);
            s[0] = double(u(rng));
            return s;
        }
        case Kind::sphere: return sample_sphere(dims[0], rng);
        case Kind::product_of_spheres: {
            State s(ambient_dim());
            std::int64_t off = 0;
            for (auto n : dims) {
                s.segment(off, n) = sample_sphere(n, rng);
                off += n;
            }
            return s;
        }
        case Kind::paired_sphere: {
            const std::int64_t n = dims[0];
            const double r = overlap;
            State s(2 * n);
            Eigen::VectorXd s1 = sample_sphere(n, rng);
            s.head(n) = s1;
            if (std::abs(std::abs(r) - 1.0) < 1e-15) {
                s.tail(n) = (r > 0 ? 1.0 : -1.0) * s1;
                return s;
            }
            // tau: uniform on the radius-sqrt(N) sphere of sigma1's
            // orthogonal complement, via Gram-Schmidt on a fresh draw.
            Eigen::VectorXd g(n);
            for (std::int64_t j = 0; j < n; ++j) g[j] = standard_normal(rng);
            g -= (g.dot(s1) / s1.squaredNorm()) * s1;
            g *= std::sqrt(double(n)) / g.norm();
            s.tail(n) = r * s1 + std::sqrt(1.0 - r * r) * g;
            return s;
        }
        }
        throw std::logic_error("sample_state: bad kind");
    }

    State sample_state(std::uint64_t seed) const {
        Rng rng = make_rng(seed);
        return sample_state(rng);
    }

private:
    static Eigen::VectorXd sample_sphere(std::int64_t n, Rng& rng) {
        Eigen::VectorXd g(n);
        double norm2 = 0.0;
        do {
            for (std::int64_t j = 0; j < n; ++j) g[j] = standard_normal(rng);
            norm2 = g.squaredNorm();
        } while (norm2 == 0.0);
        return g * (std::sqrt(double(n)) / std::sqrt(norm2));
    }
};

} // namespace felab
