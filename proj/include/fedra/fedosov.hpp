#pragma once

#include "fedra/connection.hpp"

namespace fedra {

// The Fedosov package: the one-form valued fiberwise vector field A solving
//   A = delta^{-1} R + delta^{-1}( nabla A + 1/2 [A, A] ),
// normalized by delta^{-1} A = 0, the flat differential D = nabla - delta + A,
// and the local conjugator trivializing D to d - delta.

struct FedosovData {
    Connection conn;
    PolyVector a_form;  // A in Omega^1(M, T^0_poly), lowest y-degree 2
    int ny;

    int dim() const { return conn.dim(); }
};

// Fixed-point iteration for A; delta^{-1} raises the y-degree, so the
// iteration stabilizes within ny steps. Convergence is exact coefficient
// equality, never a tolerance.
inline FedosovData compute_A(const Connection& conn, int ny) {
    if (ny < 2) throw Error("compute_A: truncation order must be >= 2");
    PolyVector big_r = curvature(conn, ny);
    PolyVector a(conn.dim(), ny);
    for (int it = 0; it <= ny + 1; ++it) {
        PolyVector rhs = schouten_bracket(a, a);
        rhs *= Rational(1, 2);
        rhs += nabla(conn, a);
        PolyVector next = delta_inv(big_r) + delta_inv(rhs);
        if (next == a) return FedosovData{conn, a, ny};
        a = std::move(next);
    }
    throw Error("compute_A: iteration failed to stabilize");
}

// D = nabla - delta + (A action), per family.
inline SmElement fedosov_D(const FedosovData& fd, const SmElement& a) {
    SmElement r = nabla(fd.conn, a);
    r -= delta(a);
    if (!fd.a_form.is_zero()) r += apply_vector_field(fd.a_form, a);
    return r;
}

inline PolyVector fedosov_D(const FedosovData& fd, const PolyVector& a) {
    PolyVector r = nabla(fd.conn, a);
    r -= delta(a);
    if (!fd.a_form.is_zero()) r += schouten_bracket(fd.a_form, a);
    return r;
}

inline PolyDiffOp fedosov_D(const FedosovData& fd, const PolyDiffOp& a) {
    PolyDiffOp r = nabla(fd.conn, a);
    r -= delta(a);
    if (!fd.a_form.is_zero()) r += gerstenhaber_bracket(vector_to_operator(fd.a_form), a);
    return r;
}

inline EForm fedosov_D(const FedosovData& fd, const EForm& a) {
    EForm r = nabla(fd.conn, a);
    r -= delta(a);
    if (!fd.a_form.is_zero()) r += lie_derivative(fd.a_form, a);
    return r;
}

inline ChainElement fedosov_D(const FedosovData& fd, const ChainElement& a) {
    ChainElement r = nabla(fd.conn, a);
    r -= delta(a);
    if (!fd.a_form.is_zero()) r += chain_action(vector_to_operator(fd.a_form), a);
    return r;
}

// T in the local splitting D = d - delta + T: the Christoffel term plus A,
// viewed as a rank-1 fiberwise operator.
inline PolyDiffOp local_t_operator(const FedosovData& fd) {
    PolyVector t = fd.conn.gamma_element(fd.ny);
    t += fd.a_form;
    if (t.is_zero()) return PolyDiffOp(fd.dim(), fd.ny);
    return vector_to_operator(t);
}

// Local conjugator P = I + delta^{-1}( d P - P o T ), an invertible rank-1
// fiberwise operator with (d - delta) o P = P o D.
inline PolyDiffOp conjugator_P(const FedosovData& fd) {
    PolyDiffOp t = local_t_operator(fd);
    PolyDiffOp p = identity_operator(fd.dim(), fd.ny);
    for (int it = 0; it <= fd.ny + 1; ++it) {
        PolyDiffOp rhs = de_rham_x(p);
        if (!t.is_zero()) rhs -= insert_compose(p, 0, t);
        PolyDiffOp next = identity_operator(fd.dim(), fd.ny) + delta_inv(rhs);
        if (next == p) return p;
        p = std::move(next);
    }
    throw Error("conjugator_P: iteration failed to stabilize");
}

// Residual of the intertwining identity (d - delta) o P - P o D, reduced to
// the element-level form  d P - delta P - P o T;  zero up to the valid
// truncation degree.
inline PolyDiffOp conjugator_residual(const FedosovData& fd, const PolyDiffOp& p) {
    PolyDiffOp t = local_t_operator(fd);
    PolyDiffOp r = de_rham_x(p);
    r -= delta(p);
    if (!t.is_zero()) r -= insert_compose(p, 0, t);
    return r;
}

}  // namespace fedra
