#pragma once

#include "fedra/polydiffop.hpp"

namespace fedra {

// Action of fiberwise polydifferential operators on fiberwise Hochschild
// chains. An operator of rank k+1 consumes k+1 consecutive tensor slots
// (cyclically for the wrap-around part) and merges them into one slot whose
// fiber variables are identified:
//
//   R_Phi(a_0 x ... x a_n) =
//       sum_{i=0}^{n-k} (-)^{ki} a_0 x ... x Phi(a_i,...,a_{i+k}) x ... x a_n
//     + sum_{j=n-k}^{n-1} (-)^{n(j+1)}
//         Phi(a_{j+1},...,a_n,a_0,...,a_{k+j-n}) x a_{k+j+1-n} x ... x a_j
//
// Chains shorter than the operator rank map to zero. The merged slot sits at
// the position of the first consumed slot for interior terms and at slot 0
// for wrap-around terms.

namespace detail {

// Applies one operator term to chain slots chosen by `assign`, identifying
// every output in a single merged fiber variable. Returns false when a
// derivative annihilates the term.
inline bool merge_slots(const DKey& op, const CKey& ch, const std::vector<int>& assign, YMulti& merged,
                        Rational& coeff) {
    merged = op.y;
    coeff = 1;
    for (size_t s = 0; s < op.slots.size(); ++s) {
        auto [m, low] = y_derivative_multi(ch.slots[assign[s]], op.slots[s]);
        if (m == 0) return false;
        coeff *= m;
        merged = merge_sym(merged, low);
    }
    return true;
}

}  // namespace detail

inline ChainElement chain_action(const PolyDiffOp& op, const ChainElement& a) {
    if (op.dim() != a.dim() || op.max_y() != a.max_y()) throw FamilyMismatch("chain_action: mismatch");
    ChainElement r(a.dim(), a.max_y());
    for (const auto& [ko, co] : op.terms()) {
        int rank = (int)ko.slots.size();
        if (rank == 0) throw FamilyMismatch("chain_action: operator rank must be >= 1");
        int k = rank - 1;
        for (const auto& [kc, cc] : a.terms()) {
            int n = (int)kc.slots.size() - 1;
            if (k > n) continue;
            int cross = pow_sign(ko.internal() * kc.ext());
            auto [sdx, dx] = merge_antisym(ko.dx, kc.dx);
            if (sdx == 0) continue;
            XPoly base = co * cc;
            base *= Rational(sdx * cross);

            // interior insertions
            for (int i = 0; i + k <= n; ++i) {
                std::vector<int> assign(rank);
                for (int s = 0; s < rank; ++s) assign[s] = i + s;
                YMulti merged;
                Rational mult;
                if (!detail::merge_slots(ko, kc, assign, merged, mult)) continue;
                std::vector<YMulti> slots;
                slots.reserve(n - k + 1);
                for (int s = 0; s < i; ++s) slots.push_back(kc.slots[s]);
                slots.push_back(merged);
                for (int s = i + k + 1; s <= n; ++s) slots.push_back(kc.slots[s]);
                r.add(CKey{dx, std::move(slots)}, base * (mult * pow_sign(k * i)));
            }

            // wrap-around insertions
            for (int j = n - k; j <= n - 1; ++j) {
                std::vector<int> assign(rank);
                for (int s = 0; s < rank; ++s) {
                    int target = j + 1 + s;
                    assign[s] = target <= n ? target : target - n - 1;
                }
                YMulti merged;
                Rational mult;
                if (!detail::merge_slots(ko, kc, assign, merged, mult)) continue;
                std::vector<YMulti> slots;
                slots.reserve(n - k + 1);
                slots.push_back(merged);
                for (int s = k + j + 1 - n; s <= j; ++s) slots.push_back(kc.slots[s]);
                r.add(CKey{dx, std::move(slots)}, base * (mult * pow_sign(n * (j + 1))));
            }
        }
    }
    return r;
}

// Hochschild boundary b = R_mu.
inline ChainElement chain_differential(const ChainElement& a) {
    return chain_action(mu_operator(a.dim(), a.max_y()), a);
}

}  // namespace fedra
