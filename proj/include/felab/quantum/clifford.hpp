#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "felab/quantum/operators.hpp"

namespace felab::quantum {

// Signed monomial +-chi_S in the algebra generated by n anticommuting
// self-adjoint square roots of 1. Subsets are bitmasks (bit i-1 = generator i).
struct SignedMonomial {
    int sign = 1;             // +1 or -1
    std::uint32_t subset = 0; // sorted by construction

    bool operator==(const SignedMonomial&) const = default;
};

// Parity of #{(s,t) in S x T : s > t}: the anticommutation count picked up
// when sorting the concatenation chi_S chi_T; equal generators then cancel
// in pairs without extra signs.
inline int monomial_mul_sign(std::uint32_t s, std::uint32_t t) {
    int swaps = 0;
    while (t != 0) {
        const int bit = std::countr_zero(t);
        swaps += std::popcount(s >> (bit + 1));
        t &= t - 1;
    }
    return (swaps & 1) ? -1 : 1;
}

inline SignedMonomial monomial_mul(const SignedMonomial& a, const SignedMonomial& b) {
    return {a.sign * b.sign * monomial_mul_sign(a.subset, b.subset), a.subset ^ b.subset};
}

// chi_S^2 = (-1)^{k(k-1)/2} with k = |S|, so the inverse is +-chi_S.
inline int monomial_square_sign(std::uint32_t s) {
    const int k = std::popcount(s);
    return ((k * (k - 1) / 2) & 1) ? -1 : 1;
}

inline SignedMonomial monomial_inverse(const SignedMonomial& a) {
    return {a.sign * monomial_square_sign(a.subset), a.subset};
}

// Sign of g chi_S g^{-1} = +- chi_S for a monomial g = +-chi_T: each disjoint
// generator pair anticommutes once, so the sign is (-1)^{|S||T| - |S ^ T|}.
inline int conjugation_sign_pattern(const SignedMonomial& g, std::uint32_t s) {
    const int m = std::popcount(s) * std::popcount(g.subset) -
                  std::popcount(s & g.subset);
    return (m & 1) ? -1 : 1;
}

// The multiplicative group of the 2^{n+1} signed monomials, handled purely
// through the sign arithmetic above (no matrices).
struct SignedMonomialGroup {
    int n = 0;

    explicit SignedMonomialGroup(int n_) : n(n_) {
        if (n < 1 || n > 14) throw std::invalid_argument("SignedMonomialGroup: need 1 <= n <= 14");
    }
    std::uint64_t order() const { return std::uint64_t(2) << n; }
    SignedMonomial identity() const { return {1, 0}; }
    SignedMonomial mul(const SignedMonomial& a, const SignedMonomial& b) const {
        return monomial_mul(a, b);
    }
    SignedMonomial inverse(const SignedMonomial& a) const { return monomial_inverse(a); }

    // chi^pi_S = chi_{pi(s_1)} ... chi_{pi(s_k)} for sorted S: reduce to a
    // signed sorted monomial via pairwise sorting swaps.
    SignedMonomial permuted_monomial(const std::vector<int>& pi, std::uint32_t s) const {
        std::vector<int> seq;
        for (int b = 0; b < n; ++b)
            if (s & (1u << b)) seq.push_back(pi[b]);
        int sign = 1;
        for (std::size_t i = 1; i < seq.size(); ++i)
            for (std::size_t j = i; j > 0 && seq[j - 1] > seq[j]; --j) {
                std::swap(seq[j - 1], seq[j]);
                sign = -sign;
            }
        std::uint32_t subset = 0;
        for (int b : seq) subset |= (1u << b);
        return {sign, subset};
    }
};

inline SignedMonomialGroup signed_monomial_group(int n) { return SignedMonomialGroup(n); }

enum class RepKind { jordan_wigner, left_regular };

// Matrix representation of the n anticommuting generators.
//   jordan_wigner: ceil(n/2) qubits, dimension 2^{ceil(n/2)};
//     chi_{2k-1} = z_1..z_{k-1} x_k, chi_{2k} = z_1..z_{k-1} y_k.
//   left_regular: dimension 2^n, the action of chi_i on the monomial basis
//     (basis vector = subset bitmask); every generator is a signed
//     permutation matrix.
struct CliffordRep {
    int n = 0;
    RepKind kind = RepKind::jordan_wigner;
    Eigen::Index dim = 0;
    std::vector<Operator> generators;
};

inline CliffordRep clifford_generators(int n, RepKind kind) {
    CliffordRep rep;
    rep.n = n;
    rep.kind = kind;
    if (kind == RepKind::jordan_wigner) {
        if (n < 1 || n > 20) throw std::invalid_argument("clifford_generators: jordan_wigner needs n <= 20");
        const int m = (n + 1) / 2;
        rep.dim = Eigen::Index(1) << m;
        PauliMatrices p = pauli_matrices();
        for (int i = 1; i <= n; ++i) {
            const int k = (i + 1) / 2; // qubit carrying this generator
            Operator g = Operator::Identity(1, 1);
            for (int site = m; site >= 1; --site) {
                const Operator* f;
                if (site < k)
                    f = &p.z;
                else if (site > k)
                    f = nullptr;
                else
                    f = (i % 2 == 1) ? &p.x : &p.y;
                g = kron(g, f ? *f : Operator::Identity(2, 2));
            }
            rep.generators.push_back(std::move(g));
        }
    } else {
        if (n < 1 || n > 10) throw std::invalid_argument("clifford_generators: left_regular needs n <= 10");
        rep.dim = Eigen::Index(1) << n;
        for (int i = 0; i < n; ++i) {
            Operator g = Operator::Zero(rep.dim, rep.dim);
            for (std::uint32_t s = 0; s < std::uint32_t(rep.dim); ++s) {
                // chi_i chi_S = (-1)^{#{t in S: t < i}} chi_{S xor {i}}
                const int sign = (std::popcount(s & ((1u << i) - 1)) & 1) ? -1 : 1;
                g(s ^ (1u << i), s) = sign;
            }
            rep.generators.push_back(std::move(g));
        }
    }
    return rep;
}

// chi_S as a matrix: the ascending product of generators of S.
inline Operator clifford_monomial(const CliffordRep& rep, std::uint32_t subset) {
    if (subset >> rep.n) throw std::invalid_argument("clifford_monomial: subset out of range");
    Operator out = Operator::Identity(rep.dim, rep.dim);
    for (int b = 0; b < rep.n; ++b)
        if (subset & (1u << b)) out = out * rep.generators[b];
    return out;
}

inline Operator clifford_monomial(const CliffordRep& rep, const std::vector<int>& sorted_subset) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < sorted_subset.size(); ++i) {
        const int g = sorted_subset[i];
        if (g < 1 || g > rep.n) throw std::invalid_argument("clifford_monomial: index out of range");
        if (i > 0 && sorted_subset[i - 1] >= g)
            throw std::invalid_argument("clifford_monomial: subset must be sorted and duplicate-free");
        mask |= (1u << (g - 1));
    }
    return clifford_monomial(rep, mask);
}

} // namespace felab::quantum
