#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace felab::quantum {

using Operator = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline double hermiticity_residual(const Operator& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Invariant for every operator produced here: max |M - M^dag| <= tol (1 + max |M|).
inline void require_hermitian(const Operator& m, double tol = 1e-10) {
    if (m.rows() != m.cols()) throw std::invalid_argument("require_hermitian: not square");
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if (hermiticity_residual(m) > tol * scale)
        throw std::invalid_argument("require_hermitian: residual above tolerance");
}

inline Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

struct PauliMatrices {
    Operator x, y, z;
};

inline PauliMatrices pauli_matrices() {
    PauliMatrices p;
    p.x = Operator::Zero(2, 2);
    p.x(0, 1) = 1.0;
    p.x(1, 0) = 1.0;
    p.y = Operator::Zero(2, 2);
    p.y(0, 1) = Complex(0.0, -1.0);
    p.y(1, 0) = Complex(0.0, 1.0);
    p.z = Operator::Zero(2, 2);
    p.z(0, 0) = 1.0;
    p.z(1, 1) = -1.0;
    return p;
}

// Single-site Pauli on m qubits. Factor order is fixed so that site i acts on
// bit (i-1) of the basis index: the diagonal of site_operator(m, i, 'z') at
// basis index b is +1 when bit (i-1) of b is 0, matching the hypercube
// enumeration of the classical engine.
inline Operator site_operator(int m, int i, char which) {
    if (m < 1 || m > 12) throw std::invalid_argument("site_operator: need 1 <= m <= 12");
    if (i < 1 || i > m) throw std::invalid_argument("site_operator: site out of range");
    PauliMatrices p = pauli_matrices();
    const Operator& sigma = which == 'x' ? p.x : which == 'y' ? p.y : p.z;
    if (which != 'x' && which != 'y' && which != 'z')
        throw std::invalid_argument("site_operator: which must be x, y or z");
    Operator out = Operator::Identity(1, 1);
    for (int site = m; site >= 1; --site)
        out = kron(out, site == i ? sigma : Operator::Identity(2, 2));
    return out;
}

} // namespace felab::quantum
