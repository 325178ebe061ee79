#pragma once

#include <span>

#include "fedra/elements.hpp"

namespace fedra {

// Schouten-Nijenhuis bracket on fiberwise polyvector fields, realized in the
// odd-coordinate calculus: a polyvector is a polynomial in (y, xi) with xi
// anticommuting, and
//     [u, v] = u*v - (-)^{k_u k_v} v*u,
//     u*v = sum_i (d_r u / d xi_i)(d v / d y^i)
// with the xi-derivative taken from the right. On vectors this is the Lie
// bracket; graded Jacobi fails with the left-derivative variant.

namespace detail {

// Accumulates u*v for fiber words (y_u, xi_u) and (y_v, xi_v).
inline void schouten_dot(PolyVector& out, const IndexSet& dx, const Rational& outer, const XPoly& cu,
                         const YMulti& yu, const IndexSet& xiu, const XPoly& cv, const YMulti& yv,
                         const IndexSet& xiv) {
    int right_flip = pow_sign((int)xiu.size() - 1);
    for (int i : xiu) {
        auto [s_rm, xi_rest] = antisym_remove(xiu, i);
        auto [mult, yv_low] = y_derivative(yv, i);
        if (mult == 0) continue;
        auto [s_mg, xi] = merge_antisym(xi_rest, xiv);
        if (s_mg == 0) continue;
        out.add(TKey{dx, merge_sym(yu, yv_low), xi},
                cu * cv * (outer * mult * s_rm * s_mg * right_flip));
    }
}

}  // namespace detail

inline PolyVector schouten_bracket(const PolyVector& a, const PolyVector& b) {
    if (a.dim() != b.dim() || a.max_y() != b.max_y()) throw FamilyMismatch("schouten_bracket: mismatch");
    PolyVector r(a.dim(), a.max_y());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            int k1 = ka.internal();
            int k2 = kb.internal();
            auto [sdx, dx] = merge_antisym(ka.dx, kb.dx);
            if (sdx == 0) continue;
            Rational outer = Rational(sdx * pow_sign(k1 * kb.ext()));
            detail::schouten_dot(r, dx, outer, ca, ka.y, ka.xi, cb, kb.y, kb.xi);
            detail::schouten_dot(r, dx, -outer * pow_sign(k1 * k2), cb, kb.y, kb.xi, ca, ka.y, ka.xi);
        }
    return r;
}

// Evaluates a polyvector on rank-many functions with the determinant
// convention: i_{xi_{i0} ^ ... ^ xi_{ik}} pairs against the arguments by a
// signed sum over permutations without a 1/n! factor.
inline SmElement apply_polyvector(const PolyVector& v, std::span<const SmElement> args) {
    SmElement r(v.dim(), v.max_y());
    for (const auto& [k, c] : v.terms()) {
        if (k.xi.size() != args.size()) continue;
        int n = (int)args.size();
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        do {
            int sgn = 1;
            {
                std::vector<int> p = perm;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (p[i] > p[j]) sgn = -sgn;
            }
            SmElement prod(v.dim(), v.max_y());
            prod.add(SmKey{k.dx, k.y}, c * sgn);
            for (int j = 0; j < n; ++j) {
                if ((int)args[j].dim() != v.dim()) throw FamilyMismatch("apply_polyvector: mismatch");
                prod = graded_mul(prod, partial_y(args[j], k.xi[perm[j]]));
            }
            r += prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return r;
}

// The fiberwise vector field applied as a derivation; the SM-family action of
// one-form valued vector fields such as A and Gamma.
inline SmElement apply_vector_field(const PolyVector& v, const SmElement& a) {
    SmElement r(a.dim(), a.max_y());
    for (const auto& [k, c] : v.terms()) {
        if (k.xi.size() != 1) throw FamilyMismatch("apply_vector_field: degree-0 polyvector required");
        for (const auto& [ka, ca] : a.terms()) {
            auto [mult, low] = y_derivative(ka.y, k.xi[0]);
            if (mult == 0) continue;
            auto [s, dx] = merge_antisym(k.dx, ka.dx);
            if (s == 0) continue;
            r.add(SmKey{dx, merge_sym(k.y, low)}, c * ca * (mult * s));
        }
    }
    return r;
}

}  // namespace fedra
