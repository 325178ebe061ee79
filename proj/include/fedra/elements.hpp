#pragma once

#include <compare>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "fedra/errors.hpp"
#include "fedra/multi_index.hpp"
#include "fedra/xpoly.hpp"

namespace fedra {

// Term keys for the five element families. Every element is a finite sum
//   sum_key  XPoly(x) * dx^{...} * (fiber word)
// truncated by total degree in the fiber variables y.

// Omega(M, SM): functions of (x, y) with a dx wrapper.
struct SmKey {
    IndexSet dx;
    YMulti y;
    auto operator<=>(const SmKey&) const = default;
    int ydeg() const { return (int)y.size(); }
    int ext() const { return (int)dx.size(); }
    int internal() const { return 0; }
};

// Omega(M, T_poly): fiberwise polyvector fields; xi holds the d/dy wedge.
// Shifted internal degree: |xi| - 1, so plain functions sit in degree -1.
struct TKey {
    IndexSet dx;
    YMulti y;
    IndexSet xi;
    auto operator<=>(const TKey&) const = default;
    int ydeg() const { return (int)y.size(); }
    int ext() const { return (int)dx.size(); }
    int internal() const { return (int)xi.size() - 1; }
};

// Omega(M, D_poly): fiberwise polydifferential operators. slots[j] is the
// derivative multi-index acting on argument j; rank = slots.size().
// Degree -1 elements have an empty slot list and multiply like functions.
struct DKey {
    IndexSet dx;
    YMulti y;
    std::vector<YMulti> slots;
    auto operator<=>(const DKey&) const = default;
    int ydeg() const { return (int)y.size(); }
    int ext() const { return (int)dx.size(); }
    int internal() const { return (int)slots.size() - 1; }
};

// Omega(M, C^poly): fiberwise Hochschild chains; slots[j] is the monomial in
// the j-th tensor factor's fiber variable y_j. Internal degree -(slots-1).
struct CKey {
    IndexSet dx;
    std::vector<YMulti> slots;
    auto operator<=>(const CKey&) const = default;
    int ydeg() const {
        int s = 0;
        for (const auto& m : slots) s += (int)m.size();
        return s;
    }
    int ext() const { return (int)dx.size(); }
    int internal() const { return -((int)slots.size() - 1); }
};

// Omega(M, E): fiberwise exterior forms in the second anticommuting basis C.
// Converted grading: internal degree -|c|.
struct EKey {
    IndexSet dx;
    YMulti y;
    IndexSet c;
    auto operator<=>(const EKey&) const = default;
    int ydeg() const { return (int)y.size(); }
    int ext() const { return (int)dx.size(); }
    int internal() const { return -(int)c.size(); }
};

template <class K>
int total_degree(const K& k) {
    return k.ext() + k.internal();
}

template <class K>
class Series {
  public:
    Series(int dim, int max_y) : dim_(dim), max_y_(max_y) {}

    int dim() const { return dim_; }
    int max_y() const { return max_y_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<K, XPoly>& terms() const { return terms_; }

    // Accumulates a canonical-key term; silently drops zero coefficients and
    // anything beyond the y-truncation order.
    void add(const K& k, const XPoly& c) {
        if (c.is_zero()) return;
        if (k.ydeg() > max_y_) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Series& operator+=(const Series& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    Series& operator-=(const Series& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    Series& operator*=(const Rational& r) {
        if (r == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= r;
        return *this;
    }

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, const Rational& r) { return a *= r; }
    friend Series operator*(const Rational& r, Series a) { return a *= r; }
    friend Series operator-(Series a) { return a *= Rational(-1); }

    bool operator==(const Series& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
    bool operator!=(const Series& o) const { return !(*this == o); }

    Series truncated(int n) const {
        Series r(dim_, max_y_);
        for (const auto& [k, c] : terms_)
            if (k.ydeg() <= n) r.add(k, c);
        return r;
    }

    int max_y_degree() const {
        int m = 0;
        for (const auto& [k, c] : terms_) m = std::max(m, k.ydeg());
        return m;
    }

    // Degree of a homogeneous element (exterior + internal); throws on mixed
    // degrees so probe generators can rely on it.
    int homogeneous_degree() const {
        if (terms_.empty()) throw Error("degree of zero element is undefined");
        int deg = total_degree(terms_.begin()->first);
        for (const auto& [k, c] : terms_)
            if (total_degree(k) != deg) throw Error("element is not homogeneous");
        return deg;
    }

  private:
    void check(const Series& o) const {
        if (dim_ != o.dim_ || max_y_ != o.max_y_)
            throw FamilyMismatch("element dimension/truncation mismatch");
    }

    int dim_;
    int max_y_;
    std::map<K, XPoly> terms_;
};

using SmElement = Series<SmKey>;
using PolyVector = Series<TKey>;
using PolyDiffOp = Series<DKey>;
using ChainElement = Series<CKey>;
using EForm = Series<EKey>;

// ---------------------------------------------------------------------------
// Canonicalizing constructors: raw index lists are sorted, antisymmetric
// slots fold their permutation sign into the coefficient, repeated
// antisymmetric indices annihilate the term.

namespace detail {
inline void check_range(const std::vector<int>& v, int d, const char* what) {
    for (int i : v)
        if (i < 1 || i > d) throw IndexError(std::string(what) + " index out of range");
}
}  // namespace detail

inline void add_raw(SmElement& el, std::vector<int> dx, std::vector<int> y, const XPoly& c) {
    detail::check_range(dx, el.dim(), "dx");
    detail::check_range(y, el.dim(), "y");
    int s = sort_antisym(dx);
    if (s == 0) return;
    std::sort(y.begin(), y.end());
    el.add(SmKey{std::move(dx), std::move(y)}, s < 0 ? -c : c);
}

inline void add_raw(PolyVector& el, std::vector<int> dx, std::vector<int> y, std::vector<int> xi,
                    const XPoly& c) {
    detail::check_range(dx, el.dim(), "dx");
    detail::check_range(y, el.dim(), "y");
    detail::check_range(xi, el.dim(), "dy");
    int s = sort_antisym(dx);
    if (s == 0) return;
    int s2 = sort_antisym(xi);
    if (s2 == 0) return;
    std::sort(y.begin(), y.end());
    el.add(TKey{std::move(dx), std::move(y), std::move(xi)}, (s * s2) < 0 ? -c : c);
}

inline void add_raw(PolyDiffOp& el, std::vector<int> dx, std::vector<int> y,
                    std::vector<std::vector<int>> slots, const XPoly& c) {
    detail::check_range(dx, el.dim(), "dx");
    detail::check_range(y, el.dim(), "y");
    int s = sort_antisym(dx);
    if (s == 0) return;
    std::sort(y.begin(), y.end());
    for (auto& a : slots) {
        detail::check_range(a, el.dim(), "slot");
        std::sort(a.begin(), a.end());
    }
    el.add(DKey{std::move(dx), std::move(y), std::move(slots)}, s < 0 ? -c : c);
}

inline void add_raw(ChainElement& el, std::vector<int> dx, std::vector<std::vector<int>> slots,
                    const XPoly& c) {
    if (slots.empty()) throw IndexError("chain needs at least one slot");
    detail::check_range(dx, el.dim(), "dx");
    int s = sort_antisym(dx);
    if (s == 0) return;
    for (auto& a : slots) {
        detail::check_range(a, el.dim(), "slot");
        std::sort(a.begin(), a.end());
    }
    el.add(CKey{std::move(dx), std::move(slots)}, s < 0 ? -c : c);
}

inline void add_raw(EForm& el, std::vector<int> dx, std::vector<int> y, std::vector<int> cset,
                    const XPoly& c) {
    detail::check_range(dx, el.dim(), "dx");
    detail::check_range(y, el.dim(), "y");
    detail::check_range(cset, el.dim(), "C");
    int s = sort_antisym(dx);
    if (s == 0) return;
    int s2 = sort_antisym(cset);
    if (s2 == 0) return;
    std::sort(y.begin(), y.end());
    el.add(EKey{std::move(dx), std::move(y), std::move(cset)}, (s * s2) < 0 ? -c : c);
}

// ---------------------------------------------------------------------------
// Shared linear operations.

template <class K>
Series<K> partial_x(const Series<K>& a, int i) {
    Series<K> r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) r.add(k, c.dx(i));
    return r;
}

namespace detail {
template <class K>
Series<K> partial_y_impl(const Series<K>& a, int i) {
    Series<K> r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        auto [mult, lowered] = y_derivative(k.y, i);
        if (mult == 0) continue;
        K nk = k;
        nk.y = lowered;
        r.add(nk, c * mult);
    }
    return r;
}
}  // namespace detail

inline SmElement partial_y(const SmElement& a, int i) { return detail::partial_y_impl(a, i); }
inline PolyVector partial_y(const PolyVector& a, int i) { return detail::partial_y_impl(a, i); }
inline PolyDiffOp partial_y(const PolyDiffOp& a, int i) { return detail::partial_y_impl(a, i); }
inline EForm partial_y(const EForm& a, int i) { return detail::partial_y_impl(a, i); }

// Chains carry one fiber variable per slot.
inline ChainElement partial_y_slot(const ChainElement& a, int slot, int i) {
    ChainElement r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        if (slot >= (int)k.slots.size()) continue;
        auto [mult, lowered] = y_derivative(k.slots[slot], i);
        if (mult == 0) continue;
        CKey nk = k;
        nk.slots[slot] = lowered;
        r.add(nk, c * mult);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Supercommutative products. The Koszul crossing rule treats dx factors as
// passing the Grassmann generators of the other factor's fiber word.

inline SmElement graded_mul(const SmElement& a, const SmElement& b) {
    if (a.dim() != b.dim() || a.max_y() != b.max_y()) throw FamilyMismatch("graded_mul: mismatch");
    SmElement r(a.dim(), a.max_y());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            auto [s, dx] = merge_antisym(ka.dx, kb.dx);
            if (s == 0) continue;
            r.add(SmKey{dx, merge_sym(ka.y, kb.y)}, (s < 0 ? -ca : ca) * cb);
        }
    return r;
}

inline EForm graded_mul(const EForm& a, const EForm& b) {
    if (a.dim() != b.dim() || a.max_y() != b.max_y()) throw FamilyMismatch("graded_mul: mismatch");
    EForm r(a.dim(), a.max_y());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            auto [sdx, dx] = merge_antisym(ka.dx, kb.dx);
            if (sdx == 0) continue;
            auto [sc, cw] = merge_antisym(ka.c, kb.c);
            if (sc == 0) continue;
            // C-word of a crosses the dx-word of b
            int cross = pow_sign((int)ka.c.size() * (int)kb.dx.size());
            Rational coeff = Rational(sdx * sc * cross);
            r.add(EKey{dx, merge_sym(ka.y, kb.y), cw}, coeff * ca * cb);
        }
    return r;
}

inline PolyVector graded_mul(const PolyVector& a, const PolyVector& b) {
    if (a.dim() != b.dim() || a.max_y() != b.max_y()) throw FamilyMismatch("graded_mul: mismatch");
    PolyVector r(a.dim(), a.max_y());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            auto [sdx, dx] = merge_antisym(ka.dx, kb.dx);
            if (sdx == 0) continue;
            auto [sxi, xi] = merge_antisym(ka.xi, kb.xi);
            if (sxi == 0) continue;
            int cross = pow_sign((int)ka.xi.size() * (int)kb.dx.size());
            Rational coeff = Rational(sdx * sxi * cross);
            r.add(TKey{dx, merge_sym(ka.y, kb.y), xi}, coeff * ca * cb);
        }
    return r;
}

// ---------------------------------------------------------------------------
// Small conversions between families.

inline PolyVector sm_to_polyvector(const SmElement& a) {
    PolyVector r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) r.add(TKey{k.dx, k.y, {}}, c);
    return r;
}

inline PolyDiffOp sm_to_polydiffop(const SmElement& a) {
    PolyDiffOp r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) r.add(DKey{k.dx, k.y, {}}, c);
    return r;
}

inline SmElement chain_to_sm(const ChainElement& a) {
    SmElement r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        if (k.slots.size() != 1) throw FamilyMismatch("chain has more than one slot");
        r.add(SmKey{k.dx, k.slots[0]}, c);
    }
    return r;
}

inline ChainElement sm_to_chain(const SmElement& a) {
    ChainElement r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) r.add(CKey{k.dx, {k.y}}, c);
    return r;
}

// Fiberwise vector fields (one xi index, rank-1 first order operators) embed
// into D_poly; this carries A and Gamma from the T-side to the D-side.
inline PolyDiffOp vector_to_operator(const PolyVector& a) {
    PolyDiffOp r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        if (k.xi.size() != 1) throw FamilyMismatch("vector_to_operator needs degree-0 polyvectors");
        r.add(DKey{k.dx, k.y, {YMulti{k.xi[0]}}}, c);
    }
    return r;
}

inline std::string family_name(const SmElement&) { return "SM"; }
inline std::string family_name(const PolyVector&) { return "Tpoly"; }
inline std::string family_name(const PolyDiffOp&) { return "Dpoly"; }
inline std::string family_name(const ChainElement&) { return "Chain"; }
inline std::string family_name(const EForm&) { return "Eform"; }

}  // namespace fedra
