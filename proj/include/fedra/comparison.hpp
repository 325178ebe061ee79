#pragma once

#include "fedra/eform.hpp"
#include "fedra/polydiffop.hpp"
#include "fedra/polyvector.hpp"

namespace fedra {

// Comparison maps between the four fiberwise complexes: the Vey map
// (polyvectors to polydifferential operators by contraction with one De Rham
// factor per argument) and the Connes map (chains to E-forms).

// V(gamma)(a_0,...,a_k) = i_gamma(d a_0 ^ ... ^ d a_k): each xi index becomes
// a first-order slot, antisymmetrized with the idempotent 1/(k+1)! weight so
// the totally skew part of the symbol reproduces gamma.
inline PolyDiffOp hkr_map(const PolyVector& g) {
    PolyDiffOp r(g.dim(), g.max_y());
    for (const auto& [k, c] : g.terms()) {
        int n = (int)k.xi.size();
        if (n == 0) {
            r.add(DKey{k.dx, k.y, {}}, c);
            continue;
        }
        Rational weight = Rational(1) / factorial(n);
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        do {
            int sgn = 1;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (perm[i] > perm[j]) sgn = -sgn;
            std::vector<YMulti> slots(n);
            for (int i = 0; i < n; ++i) slots[i] = YMulti{k.xi[perm[i]]};
            r.add(DKey{k.dx, k.y, std::move(slots)}, c * (weight * sgn));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return r;
}

// Total skew-symmetrization of the symbol of a first-order operator; the
// inverse check for hkr_map. Requires every slot to be a single index.
inline PolyVector skew_symbol(const PolyDiffOp& op) {
    PolyVector r(op.dim(), op.max_y());
    for (const auto& [k, c] : op.terms()) {
        std::vector<int> xi;
        xi.reserve(k.slots.size());
        for (const auto& s : k.slots) {
            if (s.size() != 1) throw FamilyMismatch("skew_symbol: slots must be first order");
            xi.push_back(s[0]);
        }
        int sgn = sort_antisym(xi);
        if (sgn == 0) continue;
        r.add(TKey{k.dx, k.y, xi}, c * Rational(sgn));
    }
    return r;
}

// Connes map: apply C^i d/dy_j^i to every tensor slot j >= 1 and identify all
// slot variables. Chain parity equals the image parity, so the dx wrapper
// passes without a sign.
inline EForm connes_map(const ChainElement& a) {
    EForm r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms()) {
        int nslots = (int)k.slots.size();
        // product over slots j >= 1 of (C^{i_j} d/dy^{i_j}) slot_j, the
        // slot-0 monomial untouched; C factors appear in slot order.
        struct Partial {
            YMulti y;
            IndexSet c;
            Rational coeff;
        };
        std::vector<Partial> acc{{k.slots[0], {}, Rational(1)}};
        for (int j = 1; j < nslots; ++j) {
            std::vector<Partial> next;
            for (const auto& p : acc)
                for (int i = 1; i <= a.dim(); ++i) {
                    auto [m, low] = y_derivative(k.slots[j], i);
                    if (m == 0) continue;
                    auto [s, cw] = merge_antisym(p.c, IndexSet{i});
                    if (s == 0) continue;
                    next.push_back({merge_sym(p.y, low), cw, p.coeff * m * s});
                }
            acc = std::move(next);
        }
        for (const auto& p : acc) r.add(EKey{k.dx, p.y, p.c}, c * p.coeff);
    }
    return r;
}

}  // namespace fedra
