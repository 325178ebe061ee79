#pragma once

#include <span>

#include "fedra/fedosov.hpp"

namespace fedra {

// Lifts onto the D-flat subspaces: the iteration
//   tau(a) = a + delta^{-1}( nabla tau(a) + [A, tau(a)] )
// for base functions, delta-closed fiberwise polyvectors/operators, and base
// exterior forms; the chain embedding rho by per-factor lifting; and the
// evaluation map nu sending delta-closed fiberwise objects back to base
// operators.

namespace detail {

template <class K>
void require_flat_input(const Series<K>& a, const char* what) {
    for (const auto& [k, c] : a.terms())
        if (k.ext() != 0 || k.ydeg() != 0)
            throw Error(std::string(what) + ": input must be free of dx and y");
}

template <class E, class Step>
E tau_iterate(const E& base, int ny, Step&& step) {
    E t = base;
    for (int it = 0; it <= ny + 1; ++it) {
        E next = base + delta_inv(step(t));
        if (next == t) return t;
        t = std::move(next);
    }
    throw Error("tau_lift: iteration failed to stabilize");
}

}  // namespace detail

inline SmElement tau_lift(const XPoly& a, const FedosovData& fd) {
    if (a.dim() != fd.dim()) throw FamilyMismatch("tau_lift: dimension mismatch");
    SmElement base(fd.dim(), fd.ny);
    base.add(SmKey{{}, {}}, a);
    return detail::tau_iterate(base, fd.ny, [&](const SmElement& t) {
        SmElement rhs = nabla(fd.conn, t);
        if (!fd.a_form.is_zero()) rhs += apply_vector_field(fd.a_form, t);
        return rhs;
    });
}

inline PolyVector tau_lift(const PolyVector& base, const FedosovData& fd) {
    detail::require_flat_input(base, "tau_lift(polyvector)");
    return detail::tau_iterate(base, fd.ny, [&](const PolyVector& t) {
        PolyVector rhs = nabla(fd.conn, t);
        if (!fd.a_form.is_zero()) rhs += schouten_bracket(fd.a_form, t);
        return rhs;
    });
}

inline PolyDiffOp tau_lift(const PolyDiffOp& base, const FedosovData& fd) {
    detail::require_flat_input(base, "tau_lift(operator)");
    return detail::tau_iterate(base, fd.ny, [&](const PolyDiffOp& t) {
        PolyDiffOp rhs = nabla(fd.conn, t);
        if (!fd.a_form.is_zero()) rhs += gerstenhaber_bracket(vector_to_operator(fd.a_form), t);
        return rhs;
    });
}

inline EForm tau_lift(const EForm& base, const FedosovData& fd) {
    detail::require_flat_input(base, "tau_lift(form)");
    return detail::tau_iterate(base, fd.ny, [&](const EForm& t) {
        EForm rhs = nabla(fd.conn, t);
        if (!fd.a_form.is_zero()) rhs += lie_derivative(fd.a_form, t);
        return rhs;
    });
}

// Base De Rham differential d_C = C^i d/dx^i on base forms (no y, no dx).
inline EForm base_deRham(const EForm& a) {
    detail::require_flat_input(a, "base_deRham");
    EForm r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms())
        for (int i = 1; i <= a.dim(); ++i) {
            XPoly dc = c.dx(i);
            if (dc.is_zero()) continue;
            auto [s, cw] = wedge_front(i, k.c);
            if (s == 0) continue;
            if (s < 0) dc *= Rational(-1);
            r.add(EKey{{}, {}, cw}, dc);
        }
    return r;
}

// A Hochschild chain over k+1 base coordinate groups: a polynomial in the
// slots*dim variables x_0^1..x_0^d, x_1^1, ..., ordered group by group.
struct BaseChain {
    int dim;
    int slots;
    XPoly poly;  // dimension slots*dim

    BaseChain(int d, int s) : dim(d), slots(s), poly(d * s) {}
    BaseChain(int d, int s, XPoly p) : dim(d), slots(s), poly(std::move(p)) {
        if (poly.dim() != d * s) throw FamilyMismatch("BaseChain: polynomial dimension mismatch");
    }
};

// All coordinate groups evaluated at the same base point.
inline XPoly diagonal_restriction(const BaseChain& a) {
    XPoly r(a.dim);
    for (const auto& [m, c] : a.poly.terms()) {
        Monomial folded(a.dim, 0);
        for (int j = 0; j < a.slots; ++j)
            for (int i = 0; i < a.dim; ++i) folded[i] += m[j * a.dim + i];
        r.add(folded, c);
    }
    return r;
}

// rho: per-monomial factorization across the coordinate groups, each factor
// lifted by tau into its own slot variable.
inline ChainElement varrho(const BaseChain& a, const FedosovData& fd) {
    if (a.dim != fd.dim()) throw FamilyMismatch("varrho: dimension mismatch");
    ChainElement r(fd.dim(), fd.ny);
    std::map<Monomial, SmElement> cache;
    auto lifted = [&](const Monomial& m) -> const SmElement& {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        XPoly p(a.dim);
        p.add(m, Rational(1));
        return cache.emplace(m, tau_lift(p, fd)).first->second;
    };

    for (const auto& [m, c] : a.poly.terms()) {
        struct Part {
            std::vector<YMulti> slots;
            XPoly coeff;
        };
        std::vector<Part> acc{{{}, XPoly::constant(fd.dim(), c)}};
        for (int j = 0; j < a.slots; ++j) {
            Monomial mj(a.dim, 0);
            for (int i = 0; i < a.dim; ++i) mj[i] = m[j * a.dim + i];
            const SmElement& lift = lifted(mj);
            std::vector<Part> next;
            for (const auto& p : acc)
                for (const auto& [k, cf] : lift.terms()) {
                    Part q = p;
                    q.slots.push_back(k.y);
                    q.coeff = q.coeff * cf;
                    if (!q.coeff.is_zero()) next.push_back(std::move(q));
                }
            acc = std::move(next);
        }
        for (auto& p : acc) r.add(CKey{{}, std::move(p.slots)}, p.coeff);
    }
    return r;
}

namespace detail {
inline XPoly sigma_to_xpoly(const SmElement& a) {
    XPoly r(a.dim());
    for (const auto& [k, c] : a.terms())
        if (k.ext() == 0 && k.ydeg() == 0) r += c;
    return r;
}
}  // namespace detail

// nu: evaluate a delta-closed fiberwise object on lifted arguments and
// project with sigma. On polyvectors this inverts the coefficient-level
// reinterpretation exactly; on operators it does so for first-order slots
// and for flat connections.
inline XPoly nu_apply(const PolyVector& v, std::span<const XPoly> args, const FedosovData& fd) {
    detail::require_flat_input(v, "nu_apply");
    std::vector<SmElement> lifted;
    lifted.reserve(args.size());
    for (const auto& a : args) lifted.push_back(tau_lift(a, fd));
    return detail::sigma_to_xpoly(apply_polyvector(v, lifted));
}

inline XPoly nu_apply(const PolyDiffOp& v, std::span<const XPoly> args, const FedosovData& fd) {
    detail::require_flat_input(v, "nu_apply");
    std::vector<SmElement> lifted;
    lifted.reserve(args.size());
    for (const auto& a : args) lifted.push_back(tau_lift(a, fd));
    return detail::sigma_to_xpoly(apply_op(v, lifted));
}

// Base polyvectors and operators are reinterpreted as delta-closed fiberwise
// objects with the same coefficients (d/dx -> d/dy); nu_apply evaluates the
// other direction.
inline const PolyVector& nu_inverse(const PolyVector& base) {
    detail::require_flat_input(base, "nu_inverse");
    return base;
}

inline const PolyDiffOp& nu_inverse(const PolyDiffOp& base) {
    detail::require_flat_input(base, "nu_inverse");
    return base;
}

// Lie derivative of base forms along base polyvectors, Cartan formula with
// the base De Rham differential d_C.
inline EForm base_lie_derivative(const PolyVector& g, const EForm& w) {
    detail::require_flat_input(g, "base_lie_derivative");
    detail::require_flat_input(w, "base_lie_derivative");
    int k = g.is_zero() ? 0 : g.homogeneous_degree();
    EForm r = base_deRham(contraction(g, w));
    EForm second = contraction(g, base_deRham(w));
    if (pow_sign(k) < 0)
        r -= second;
    else
        r += second;
    return r;
}

}  // namespace fedra
