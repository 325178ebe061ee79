#pragma once

#include "fedra/chains.hpp"
#include "fedra/connection.hpp"
#include "fedra/eform.hpp"
#include "fedra/linfty.hpp"
#include "fedra/polyvector.hpp"

namespace fedra {

// Concrete homotopy-algebra carriers: the polyvector DGLA (zero differential,
// Schouten bracket), the polydifferential DGLA (Hochschild differential,
// Gerstenhaber bracket), their hbar-series lifts, the chain and form module
// tables, and small fixtures used by the relation suites.

inline DglaOps<PolyVector> tpoly_dgla(int d, int ny) {
    DglaOps<PolyVector> ops;
    ops.zero = [d, ny] { return PolyVector(d, ny); };
    ops.diff = [](const PolyVector& a, int) { return Rational(0) * a; };
    ops.bracket = [](const PolyVector& a, int, const PolyVector& b, int) {
        return schouten_bracket(a, b);
    };
    return ops;
}

inline DglaOps<PolyDiffOp> dpoly_dgla(int d, int ny) {
    DglaOps<PolyDiffOp> ops;
    ops.zero = [d, ny] { return PolyDiffOp(d, ny); };
    ops.diff = [](const PolyDiffOp& a, int) { return cochain_differential(a); };
    ops.bracket = [](const PolyDiffOp& a, int, const PolyDiffOp& b, int) {
        return gerstenhaber_bracket(a, b);
    };
    return ops;
}

// The one-form splitting DGLA (Omega(T_poly), d, [,]): the carrier for the
// nilpotency-as-Maurer-Cartan reading of the Fedosov differential.
inline DglaOps<PolyVector> tpoly_deRham_dgla(int d, int ny) {
    DglaOps<PolyVector> ops;
    ops.zero = [d, ny] { return PolyVector(d, ny); };
    ops.diff = [](const PolyVector& a, int) { return de_rham_x(a); };
    ops.bracket = [](const PolyVector& a, int, const PolyVector& b, int) {
        return schouten_bracket(a, b);
    };
    return ops;
}

template <class E>
DglaOps<HbarSeries<E>> hbar_dgla(const DglaOps<E>& base, int nhbar) {
    DglaOps<HbarSeries<E>> ops;
    ops.zero = [base, nhbar] { return HbarSeries<E>(nhbar, base.zero()); };
    ops.diff = [base](const HbarSeries<E>& a, int dega) {
        return hbar_map([&](const E& x) { return base.diff(x, dega); }, a, base.zero());
    };
    ops.bracket = [base](const HbarSeries<E>& a, int dega, const HbarSeries<E>& b, int degb) {
        return hbar_convolve([&](const E& x, const E& y) { return base.bracket(x, dega, y, degb); }, a,
                             b, base.zero());
    };
    return ops;
}

// DG module of fiberwise chains over the polydifferential DGLA.
inline ModuleTable<PolyDiffOp, ChainElement> chain_module(int d, int ny) {
    ModuleTable<PolyDiffOp, ChainElement> phi;
    phi.cutoff = 1;
    phi.maps.resize(2);
    phi.maps[0] = [](std::span<const PolyDiffOp>, const ChainElement& v) {
        return chain_differential(v);
    };
    phi.maps[1] = [](std::span<const PolyDiffOp> g, const ChainElement& v) {
        return chain_action(g[0], v);
    };
    return phi;
}

// DG module of fiberwise forms over the polyvector DGLA (zero differential).
inline ModuleTable<PolyVector, EForm> eform_module(int d, int ny) {
    ModuleTable<PolyVector, EForm> phi;
    phi.cutoff = 1;
    phi.maps.resize(2);
    phi.maps[0] = [d, ny](std::span<const PolyVector>, const EForm& v) { return Rational(0) * v; };
    phi.maps[1] = [](std::span<const PolyVector> g, const EForm& v) { return lie_derivative(g[0], v); };
    return phi;
}

// ---------------------------------------------------------------------------
// Fixtures.

// One-dimensional abelian DGLA on a single degree-1 generator.
struct Line {
    Rational v;
    bool is_zero() const { return v == 0; }
    Line operator+(const Line& o) const { return {v + o.v}; }
    Line operator-(const Line& o) const { return {v - o.v}; }
    Line& operator+=(const Line& o) {
        v += o.v;
        return *this;
    }
    Line& operator-=(const Line& o) {
        v -= o.v;
        return *this;
    }
    friend Line operator*(const Rational& r, const Line& a) { return {r * a.v}; }
    friend Line operator*(const Line& a, const Rational& r) { return {r * a.v}; }
    bool operator==(const Line& o) const { return v == o.v; }
};

inline DglaOps<Line> line_dgla() {
    DglaOps<Line> ops;
    ops.zero = [] { return Line{0}; };
    ops.diff = [](const Line&, int) { return Line{0}; };
    ops.bracket = [](const Line&, int, const Line&, int) { return Line{0}; };
    return ops;
}

// Fiberwise rescaling y -> lambda y, an algebra automorphism; conjugation is
// a strict DGLA automorphism of the polydifferential algebra.
inline SmElement rescale_sm(const SmElement& a, const Rational& lambda) {
    SmElement r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        Rational f(1);
        for (size_t i = 0; i < k.y.size(); ++i) f *= lambda;
        r.add(k, c * f);
    }
    return r;
}

inline PolyDiffOp rescale_conjugate(const PolyDiffOp& op, const Rational& lambda) {
    PolyDiffOp r(op.dim(), op.max_y());
    Rational inv = Rational(1) / lambda;
    for (const auto& [k, c] : op.terms()) {
        Rational f(1);
        for (size_t i = 0; i < k.y.size(); ++i) f *= lambda;
        for (const auto& s : k.slots)
            for (size_t i = 0; i < s.size(); ++i) f *= inv;
        r.add(k, c * f);
    }
    return r;
}

inline ChainElement rescale_chain(const ChainElement& a, const Rational& lambda) {
    ChainElement r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        Rational f(1);
        for (const auto& s : k.slots)
            for (size_t i = 0; i < s.size(); ++i) f *= lambda;
        r.add(k, c * f);
    }
    return r;
}

inline MorphismTable<PolyDiffOp, PolyDiffOp> rescale_morphism(const Rational& lambda) {
    MorphismTable<PolyDiffOp, PolyDiffOp> f;
    f.cutoff = 3;
    f.maps.resize(4);
    f.maps[1] = [lambda](std::span<const PolyDiffOp> g) { return rescale_conjugate(g[0], lambda); };
    return f;
}

// Homotopy morphism from the abelian line into the d = 1 polydifferential
// DGLA, generated by a rank-1 operator seed:
//   f1 = d(seed),  f2 = -[seed, f1],  f3 = [seed, [seed, f1]].
// The quadratic relations at arities <= 3 hold because f1 is exact and the
// corrections are nested brackets of the seed; checked, not assumed.
inline MorphismTable<Line, PolyDiffOp> line_two_term_morphism(const PolyDiffOp& seed) {
    PolyDiffOp f1 = cochain_differential(seed);
    PolyDiffOp f2 = Rational(-1) * gerstenhaber_bracket(seed, f1);
    PolyDiffOp f3 = gerstenhaber_bracket(seed, gerstenhaber_bracket(seed, f1));
    MorphismTable<Line, PolyDiffOp> f;
    f.cutoff = 3;
    f.complete = false;  // genuine higher corrections exist beyond arity 3
    f.maps.resize(4);
    f.maps[1] = [f1](std::span<const Line> g) { return g[0].v * f1; };
    f.maps[2] = [f2](std::span<const Line> g) { return (g[0].v * g[1].v) * f2; };
    f.maps[3] = [f3](std::span<const Line> g) { return (g[0].v * g[1].v * g[2].v) * f3; };
    return f;
}

}  // namespace fedra
