#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "felab/hamiltonian.hpp"
#include "felab/models/increments.hpp"

namespace felab {

// Branching random walk on the d-ary tree of the given depth: one i.i.d.
// increment per vertex, the energy of a leaf is beta times the sum along its
// root path. The root vertex is included, so a depth-N leaf carries N+1
// increments and the marginal mgf is (depth+1) * logmgf_nu(t*beta).
//
// Vertex storage: level l holds d^l vertices; the ancestor of leaf w at level
// l is w / d^(depth-l).
inline HamiltonianLaw grem_law(std::int64_t d, std::int64_t depth,
                               std::vector<IncrementLaw> per_level, double beta = 1.0) {
    if (static_cast<std::int64_t>(per_level.size()) != depth + 1)
        throw std::invalid_argument("grem_law: need depth+1 increment laws (root included)");
    StateSpace space = StateSpace::tree_leaves(d, depth);

    std::vector<std::uint64_t> level_size(depth + 1);
    std::vector<std::uint64_t> level_offset(depth + 1);
    std::uint64_t total = 0;
    for (std::int64_t l = 0; l <= depth; ++l) {
        level_offset[l] = total;
        std::uint64_t s = 1;
        for (std::int64_t i = 0; i < l; ++i) s *= std::uint64_t(d);
        level_size[l] = s;
        total += s;
    }
    const std::uint64_t n_leaves = level_size[depth];

    HamiltonianLaw law;
    law.space = space;
    law.symmetry = SymmetryTag::tree_automorphisms;
    law.name = "grem";
    law.sample = [=](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        std::vector<double> x(total);
        std::uint64_t idx = 0;
        for (std::int64_t l = 0; l <= depth; ++l)
            for (std::uint64_t v = 0; v < level_size[l]; ++v)
                x[idx++] = per_level[l].sample(rng);

        HamiltonianSample s;
        s.full_table.resize(n_leaves);
        // one pass down the tree: energy of a vertex = parent energy + own x
        std::vector<double> cur{beta * x[0]};
        for (std::int64_t l = 1; l <= depth; ++l) {
            std::vector<double> next(level_size[l]);
            for (std::uint64_t v = 0; v < level_size[l]; ++v)
                next[v] = cur[v / d] + beta * x[level_offset[l] + v];
            cur.swap(next);
        }
        s.full_table = cur;
        auto table = s.full_table;
        s.evaluate = [table](const State& st) {
            return table[static_cast<std::uint64_t>(st[0])];
        };
        return s;
    };
    law.marginal_log_mgf = [per_level, beta](double t) {
        double acc = 0.0;
        for (const auto& nu : per_level) acc += nu.log_mgf(t * beta);
        return acc;
    };
    return law;
}

inline HamiltonianLaw brw_law(std::int64_t d, std::int64_t depth, const IncrementLaw& nu,
                              double beta = 1.0) {
    HamiltonianLaw law = grem_law(d, depth, std::vector<IncrementLaw>(depth + 1, nu), beta);
    law.name = "brw";
    return law;
}

} // namespace felab
