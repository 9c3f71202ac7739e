#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "felab/state_space.hpp"

namespace felab {

// Symmetry group of the Hamiltonian law, acting transitively on the state
// space. Ordered so that subgroup containment can be queried: a law invariant
// under a group is invariant under any subgroup acting on the same space.
enum class SymmetryTag {
    none,
    z2n,                 // coordinate sign flips on the hypercube
    signed_permutations, // sign flips and coordinate permutations
    orthogonal,          // O(N)
    product_orthogonal,  // prod_i O(N_i)
    tree_automorphisms,  // root-preserving tree automorphisms
};

inline bool tag_contains(SymmetryTag big, SymmetryTag small) {
    if (big == small) return true;
    switch (big) {
    case SymmetryTag::orthogonal:
        return small == SymmetryTag::signed_permutations || small == SymmetryTag::z2n;
    case SymmetryTag::signed_permutations:
        return small == SymmetryTag::z2n;
    default:
        return false;
    }
}

// Largest tag guaranteed for the sum of two laws.
inline SymmetryTag tag_intersection(SymmetryTag a, SymmetryTag b) {
    if (a == SymmetryTag::none || b == SymmetryTag::none) return SymmetryTag::none;
    if (tag_contains(a, b)) return b;
    if (tag_contains(b, a)) return a;
    return SymmetryTag::none;
}

inline const char* tag_name(SymmetryTag t) {
    switch (t) {
    case SymmetryTag::none: return "none";
    case SymmetryTag::z2n: return "Z2^N";
    case SymmetryTag::signed_permutations: return "signed_permutations";
    case SymmetryTag::orthogonal: return "O(N)";
    case SymmetryTag::product_orthogonal: return "prod O(N_i)";
    case SymmetryTag::tree_automorphisms: return "tree_automorphisms";
    }
    return "?";
}

// One disorder realization: an energy function over states. Enumerable-space
// laws also carry the full energy table in enumeration order; the table and
// the evaluator must agree on every enumerated state.
struct HamiltonianSample {
    std::function<double(const State&)> evaluate;
    std::vector<double> full_table; // empty when the space is not tabulated

    bool has_table() const { return !full_table.empty(); }
};

// A seeded distribution over Hamiltonian realizations. Samplers are pure
// functions of the seed: the same seed reproduces the same realization
// bit for bit.
struct HamiltonianLaw {
    StateSpace space;
    SymmetryTag symmetry = SymmetryTag::none;
    std::function<HamiltonianSample(std::uint64_t)> sample;
    // t -> log E[e^{t H(sigma)}] when the marginal law of H(sigma) does not
    // depend on sigma; absent otherwise.
    std::function<double(double)> marginal_log_mgf;
    std::string name = "law";

    bool has_mgf() const { return static_cast<bool>(marginal_log_mgf); }
};

inline HamiltonianLaw zero_law(StateSpace space) {
    HamiltonianLaw law;
    law.space = space;
    law.symmetry = space.kind == StateSpace::Kind::hypercube ? SymmetryTag::z2n
                 : space.kind == StateSpace::Kind::sphere    ? SymmetryTag::orthogonal
                 : space.kind == StateSpace::Kind::tree_leaves ? SymmetryTag::tree_automorphisms
                 : space.kind == StateSpace::Kind::product_of_spheres ? SymmetryTag::product_orthogonal
                                                             : SymmetryTag::signed_permutations;
    law.name = "zero";
    const bool tabulate = space.enumerable();
    const std::uint64_t n = tabulate ? space.size() : 0;
    law.sample = [tabulate, n](std::uint64_t) {
        HamiltonianSample s;
        s.evaluate = [](const State&) { return 0.0; };
        if (tabulate) s.full_table.assign(n, 0.0);
        return s;
    };
    law.marginal_log_mgf = [](double) { return 0.0; };
    return law;
}

// The deterministic two-point Hamiltonian on {-1,+1}: H(+1) = 0, H(-1) = x.
// Not invariant under any transitive group unless x = 0.
inline HamiltonianLaw two_point_law(double x) {
    HamiltonianLaw law;
    law.space = StateSpace::hypercube(1);
    law.symmetry = SymmetryTag::none;
    law.name = "two_point";
    law.sample = [x](std::uint64_t) {
        HamiltonianSample s;
        s.evaluate = [x](const State& sigma) { return sigma[0] < 0 ? x : 0.0; };
        s.full_table = {0.0, x}; // index 0 -> sigma=+1, index 1 -> sigma=-1
        return s;
    };
    return law;
}

// Law of the independent sum H1 + H2. Child realizations are drawn from
// derive_seed(seed, 0, 0) and derive_seed(seed, 1, 0).
inline HamiltonianLaw sum_laws(const HamiltonianLaw& l1, const HamiltonianLaw& l2) {
    if (!(l1.space == l2.space))
        throw std::invalid_argument("sum_laws: mismatched state spaces");
    HamiltonianLaw law;
    law.space = l1.space;
    law.symmetry = tag_intersection(l1.symmetry, l2.symmetry);
    law.name = l1.name + "+" + l2.name;
    auto s1 = l1.sample, s2 = l2.sample;
    law.sample = [s1, s2](std::uint64_t seed) {
        HamiltonianSample a = s1(derive_seed(seed, 0, 0));
        HamiltonianSample b = s2(derive_seed(seed, 1, 0));
        HamiltonianSample out;
        if (a.has_table() && b.has_table()) {
            out.full_table.resize(a.full_table.size());
            for (std::size_t i = 0; i < a.full_table.size(); ++i)
                out.full_table[i] = a.full_table[i] + b.full_table[i];
        }
        auto ea = std::move(a.evaluate), eb = std::move(b.evaluate);
        out.evaluate = [ea, eb](const State& s) { return ea(s) + eb(s); };
        return out;
    };
    if (l1.has_mgf() && l2.has_mgf()) {
        auto m1 = l1.marginal_log_mgf, m2 = l2.marginal_log_mgf;
        law.marginal_log_mgf = [m1, m2](double t) { return m1(t) + m2(t); };
    }
    return law;
}

} // namespace felab
