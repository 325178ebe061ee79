#pragma once

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

#include "fedra/errors.hpp"
#include "fedra/rational.hpp"

namespace fedra {

// Symmetric multi-index: non-decreasing list of fiber indices in 1..d.
// Degree = size. y^{(1,1,2)} means (y^1)^2 y^2.
using YMulti = std::vector<int>;

// Antisymmetric index set: strictly increasing list (dx, C, or d/dy wedges).
using IndexSet = std::vector<int>;

inline int parity(int k) { return ((k % 2) + 2) % 2; }
inline int pow_sign(int k) { return parity(k) == 0 ? 1 : -1; }

// Sorts an antisymmetric index list in place; returns the permutation sign,
// or 0 when an index repeats.
inline int sort_antisym(std::vector<int>& v) {
    int sign = 1;
    for (size_t i = 1; i < v.size(); ++i)
        for (size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
            std::swap(v[j], v[j - 1]);
            sign = -sign;
        }
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1]) return 0;
    return sign;
}

// Wedge-merges two strictly increasing sets; sign 0 on a common index.
inline std::pair<int, IndexSet> merge_antisym(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int sign = 1;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return {0, {}};
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining a-elements
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return {sign, out};
}

// Inserts one index at the front of a wedge word held in sorted form.
inline std::pair<int, IndexSet> wedge_front(int idx, const IndexSet& s) {
    return merge_antisym(IndexSet{idx}, s);
}

// Position of idx in a sorted set, or -1.
inline int set_position(const IndexSet& s, int idx) {
    auto it = std::lower_bound(s.begin(), s.end(), idx);
    if (it == s.end() || *it != idx) return -1;
    return (int)(it - s.begin());
}

// Left derivative on a wedge word: returns (sign, word minus idx) or sign 0.
inline std::pair<int, IndexSet> antisym_remove(const IndexSet& s, int idx) {
    int pos = set_position(s, idx);
    if (pos < 0) return {0, {}};
    IndexSet out = s;
    out.erase(out.begin() + pos);
    return {pow_sign(pos), out};
}

inline YMulti merge_sym(const YMulti& a, const YMulti& b) {
    YMulti out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline int count_in(const YMulti& m, int idx) {
    auto [lo, hi] = std::equal_range(m.begin(), m.end(), idx);
    return (int)(hi - lo);
}

// d/dy^idx applied to the monomial y^m: (multiplicity, lowered monomial).
inline std::pair<Rational, YMulti> y_derivative(const YMulti& m, int idx) {
    int c = count_in(m, idx);
    if (c == 0) return {Rational(0), {}};
    YMulti out = m;
    out.erase(std::lower_bound(out.begin(), out.end(), idx));
    return {Rational(c), out};
}

// Iterated derivative d/dy^alpha on y^m; exact falling-factorial coefficient.
inline std::pair<Rational, YMulti> y_derivative_multi(const YMulti& m, const YMulti& alpha) {
    Rational coeff(1);
    YMulti cur = m;
    for (int idx : alpha) {
        auto [c, next] = y_derivative(cur, idx);
        if (c == 0) return {Rational(0), {}};
        coeff *= c;
        cur = std::move(next);
    }
    return {coeff, cur};
}

inline std::vector<int> counts_of(const YMulti& m, int d) {
    std::vector<int> c(d, 0);
    for (int i : m) {
        if (i < 1 || i > d) throw IndexError("fiber index out of range");
        c[i - 1] += 1;
    }
    return c;
}

inline YMulti multi_from_counts(const std::vector<int>& c) {
    YMulti m;
    for (size_t i = 0; i < c.size(); ++i)
        for (int k = 0; k < c[i]; ++k) m.push_back((int)i + 1);
    return m;
}

// Enumerates ordered splits of the multiset `alpha` into `parts` pieces,
// invoking fn(pieces, multiplicity) with the multinomial multiplicity of
// each split. This is the engine behind every multi-index Leibniz rule.
inline void for_each_split(const YMulti& alpha, int parts, int d,
                           const std::function<void(const std::vector<YMulti>&, const Rational&)>& fn) {
    std::vector<int> counts = counts_of(alpha, d);
    std::vector<std::vector<int>> piece_counts(parts, std::vector<int>(d, 0));
    std::vector<YMulti> pieces(parts);

    std::function<void(int, Rational)> rec_index = [&](int vi, Rational mult) {
        if (vi == d) {
            for (int p = 0; p < parts; ++p) pieces[p] = multi_from_counts(piece_counts[p]);
            fn(pieces, mult);
            return;
        }
        int total = counts[vi];
        // compositions of `total` into `parts` parts
        std::vector<int> comp(parts, 0);
        std::function<void(int, int, Rational)> rec_comp = [&](int pi, int rem, Rational m) {
            if (pi == parts - 1) {
                comp[pi] = rem;
                for (int p = 0; p < parts; ++p) piece_counts[p][vi] = comp[p];
                // multinomial total! / prod comp!
                Rational mm = factorial(total);
                for (int p = 0; p < parts; ++p) mm /= factorial(comp[p]);
                rec_index(vi + 1, m * mm);
                return;
            }
            for (int k = 0; k <= rem; ++k) {
                comp[pi] = k;
                rec_comp(pi + 1, rem - k, m);
            }
        };
        rec_comp(0, total, mult);
    };
    rec_index(0, Rational(1));
}

}  // namespace fedra
