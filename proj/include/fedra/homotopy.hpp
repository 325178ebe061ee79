#pragma once

#include "fedra/elements.hpp"

namespace fedra {

// The contracting-homotopy package: the fiber differential delta = dx^i d/dy^i,
// its homotopy delta^{-1}, the projection sigma onto the (y = dx = 0) part,
// and the chain-complex homotopy h. On every family delta acts by lowering
// one fiber variable and wedging dx in front; the bracket/action formulations
// reduce to this and the unit tests check the equivalence.

namespace detail {

template <class K, class LowerFn>
Series<K> delta_generic(const Series<K>& a, LowerFn&& lower) {
    Series<K> r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms())
        for (int i = 1; i <= a.dim(); ++i)
            lower(k, c, i, [&](K nk, const Rational& mult) {
                auto [s, dx] = wedge_front(i, nk.dx);
                if (s == 0) return;
                nk.dx = dx;
                r.add(nk, c * (mult * s));
            });
    return r;
}

}  // namespace detail

inline SmElement delta(const SmElement& a) {
    return detail::delta_generic(a, [](const SmKey& k, const XPoly&, int i, auto&& emit) {
        auto [m, low] = y_derivative(k.y, i);
        if (m == 0) return;
        emit(SmKey{k.dx, low}, m);
    });
}

inline PolyVector delta(const PolyVector& a) {
    return detail::delta_generic(a, [](const TKey& k, const XPoly&, int i, auto&& emit) {
        auto [m, low] = y_derivative(k.y, i);
        if (m == 0) return;
        emit(TKey{k.dx, low, k.xi}, m);
    });
}

inline PolyDiffOp delta(const PolyDiffOp& a) {
    return detail::delta_generic(a, [](const DKey& k, const XPoly&, int i, auto&& emit) {
        auto [m, low] = y_derivative(k.y, i);
        if (m == 0) return;
        emit(DKey{k.dx, low, k.slots}, m);
    });
}

inline EForm delta(const EForm& a) {
    return detail::delta_generic(a, [](const EKey& k, const XPoly&, int i, auto&& emit) {
        auto [m, low] = y_derivative(k.y, i);
        if (m == 0) return;
        emit(EKey{k.dx, low, k.c}, m);
    });
}

inline ChainElement delta(const ChainElement& a) {
    return detail::delta_generic(a, [](const CKey& k, const XPoly&, int i, auto&& emit) {
        for (size_t s = 0; s < k.slots.size(); ++s) {
            auto [m, low] = y_derivative(k.slots[s], i);
            if (m == 0) continue;
            CKey nk = k;
            nk.slots[s] = low;
            emit(std::move(nk), m);
        }
    });
}

// delta^{-1}: one dx is traded for a y and the term is rescaled by the
// inverse total (y, dx)-bidegree; the (y = dx = 0) component maps to zero.
// This is the closed form of the t-integral in the contracting homotopy.
namespace detail {

template <class K>
Series<K> delta_inv_generic(const Series<K>& a) {
    Series<K> r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        int p = k.ydeg();
        int q = k.ext();
        if (p + q == 0) continue;
        Rational scale = Rational(1) / Rational(p + q);
        for (size_t pos = 0; pos < k.dx.size(); ++pos) {
            int ell = k.dx[pos];
            K nk = k;
            nk.dx.erase(nk.dx.begin() + pos);
            nk.y = merge_sym(nk.y, YMulti{ell});
            int sgn = pow_sign((int)pos);
            r.add(nk, c * (scale * sgn));
        }
    }
    return r;
}

}  // namespace detail

inline SmElement delta_inv(const SmElement& a) { return detail::delta_inv_generic(a); }
inline PolyVector delta_inv(const PolyVector& a) { return detail::delta_inv_generic(a); }
inline PolyDiffOp delta_inv(const PolyDiffOp& a) { return detail::delta_inv_generic(a); }
inline EForm delta_inv(const EForm& a) { return detail::delta_inv_generic(a); }

template <class K>
Series<K> sigma(const Series<K>& a) {
    Series<K> r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms())
        if (k.ext() == 0 && k.ydeg() == 0) r.add(k, c);
    return r;
}

// a - sigma(a) - delta(delta_inv(a)) - delta_inv(delta(a)); zero for every
// element of the four non-chain families.
template <class K>
Series<K> hodge_residual(const Series<K>& a) {
    Series<K> r = a;
    r -= sigma(a);
    r -= delta(delta_inv(a));
    r -= delta_inv(delta(a));
    return r;
}

// Chain homotopy h. Substitutes y_0 -> t y_0, dx -> t dx,
// y_j -> y_j + (t-1) y_0 for j >= 1, contracts one dx against y_0 and
// integrates dt/t termwise; every integrand is polynomial in t so the
// result is exact. Exterior degree 0 maps to zero.
inline ChainElement h_chain(const ChainElement& a) {
    ChainElement r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        if (k.dx.empty()) continue;
        int nslots = (int)k.slots.size();
        int base_t_pow = (int)k.slots[0].size() + (int)k.dx.size();

        // Distribute each tail slot between itself and y_0, tracking the
        // (t-1)-power of the moved part.
        std::vector<YMulti> moved(nslots), kept(nslots);
        std::function<void(int, YMulti, Rational, int)> rec = [&](int j, YMulti y0_extra, Rational mult,
                                                                  int tm1_pow) {
            if (j == nslots) {
                for (size_t pos = 0; pos < k.dx.size(); ++pos) {
                    int ell = k.dx[pos];
                    // integral of t^{base-1+i} (t-1)^{m} dt over [0,1]
                    Rational integral(0);
                    for (int i = 0; i <= tm1_pow; ++i) {
                        Rational term = binomial(tm1_pow, i) / Rational(base_t_pow + i);
                        if ((tm1_pow - i) % 2 == 1) term = -term;
                        integral += term;
                    }
                    if (integral == 0) continue;
                    CKey nk = k;
                    nk.dx.erase(nk.dx.begin() + pos);
                    nk.slots[0] = merge_sym(merge_sym(k.slots[0], y0_extra), YMulti{ell});
                    for (int jj = 1; jj < nslots; ++jj) nk.slots[jj] = kept[jj];
                    int sgn = pow_sign((int)pos);
                    r.add(nk, c * (mult * integral * sgn));
                }
                return;
            }
            if (j == 0) {
                rec(1, std::move(y0_extra), std::move(mult), tm1_pow);
                return;
            }
            for_each_split(k.slots[j], 2, a.dim(), [&](const std::vector<YMulti>& parts, const Rational& m) {
                kept[j] = parts[0];
                rec(j + 1, merge_sym(y0_extra, parts[1]), mult * m, tm1_pow + (int)parts[1].size());
            });
        };
        rec(0, {}, Rational(1), 0);
    }
    return r;
}

// (delta h + h delta) a - a; zero on exterior degree >= 1.
inline ChainElement chain_hodge_residual(const ChainElement& a) {
    ChainElement r = delta(h_chain(a));
    r += h_chain(delta(a));
    r -= a;
    return r;
}

}  // namespace fedra
