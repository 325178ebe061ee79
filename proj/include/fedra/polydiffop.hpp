#pragma once

#include <span>

#include "fedra/elements.hpp"

namespace fedra {

// Fiberwise polydifferential operator calculus: slot insertion with the
// multi-index Leibniz rule, the Gerstenhaber bracket built from insertions,
// and the Hochschild cochain differential as the inner derivation by the
// fiberwise multiplication.

// The fiberwise (commutative) multiplication, a rank-2 operator.
inline PolyDiffOp mu_operator(int dim, int ny) {
    PolyDiffOp mu(dim, ny);
    mu.add(DKey{{}, {}, {YMulti{}, YMulti{}}}, XPoly::constant(dim, Rational(1)));
    return mu;
}

inline PolyDiffOp identity_operator(int dim, int ny) {
    PolyDiffOp id(dim, ny);
    id.add(DKey{{}, {}, {YMulti{}}}, XPoly::constant(dim, Rational(1)));
    return id;
}

// Insert op2 into slot i of op1: the derivative multi-index of that slot
// distributes over op2's coefficient monomial and op2's own slots with
// multinomial weights.
inline PolyDiffOp insert_compose(const PolyDiffOp& op1, int slot, const PolyDiffOp& op2) {
    if (op1.dim() != op2.dim() || op1.max_y() != op2.max_y())
        throw FamilyMismatch("insert_compose: mismatch");
    PolyDiffOp r(op1.dim(), op1.max_y());
    for (const auto& [k1, c1] : op1.terms()) {
        if (slot < 0 || slot >= (int)k1.slots.size()) throw IndexError("insert_compose: bad slot");
        for (const auto& [k2, c2] : op2.terms()) {
            int cross = pow_sign(k1.internal() * k2.ext());
            auto [sdx, dx] = merge_antisym(k1.dx, k2.dx);
            if (sdx == 0) continue;
            int parts = (int)k2.slots.size() + 1;
            for_each_split(k1.slots[slot], parts, op1.dim(),
                           [&](const std::vector<YMulti>& pieces, const Rational& mult) {
                               // pieces[0] hits op2's coefficient monomial
                               auto [dcoeff, y2low] = y_derivative_multi(k2.y, pieces[0]);
                               if (dcoeff == 0) return;
                               std::vector<YMulti> slots;
                               slots.reserve(k1.slots.size() + k2.slots.size() - 1);
                               for (int s = 0; s < slot; ++s) slots.push_back(k1.slots[s]);
                               for (size_t j = 0; j < k2.slots.size(); ++j)
                                   slots.push_back(merge_sym(k2.slots[j], pieces[j + 1]));
                               for (size_t s = slot + 1; s < k1.slots.size(); ++s)
                                   slots.push_back(k1.slots[s]);
                               r.add(DKey{dx, merge_sym(k1.y, y2low), std::move(slots)},
                                     c1 * c2 * (mult * dcoeff * sdx * cross));
                           });
        }
    }
    return r;
}

inline PolyDiffOp gerstenhaber_bracket(const PolyDiffOp& a, const PolyDiffOp& b) {
    if (a.dim() != b.dim() || a.max_y() != b.max_y())
        throw FamilyMismatch("gerstenhaber_bracket: mismatch");
    PolyDiffOp r(a.dim(), a.max_y());
    // [a,b] = sum_i (-)^{i k2} a o_i b - (-)^{k1 k2} sum_i (-)^{i k1} b o_i a,
    // termwise over homogeneous ranks; the swap sign uses total degrees so
    // graded antisymmetry holds for form-valued operators.
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            PolyDiffOp at(a.dim(), a.max_y());
            at.add(ka, ca);
            PolyDiffOp bt(b.dim(), b.max_y());
            bt.add(kb, cb);
            int k1 = ka.internal(), k2 = kb.internal();
            for (int i = 0; i <= k1; ++i) {
                PolyDiffOp ins = insert_compose(at, i, bt);
                if (pow_sign(i * k2) < 0) ins *= Rational(-1);
                r += ins;
            }
            int swap_sign = -pow_sign(total_degree(ka) * total_degree(kb));
            for (int i = 0; i <= k2; ++i) {
                PolyDiffOp ins = insert_compose(bt, i, at);
                if (swap_sign * pow_sign(i * k1) < 0) ins *= Rational(-1);
                r += ins;
            }
        }
    return r;
}

// Hochschild cochain differential dPhi = [mu, Phi].
inline PolyDiffOp cochain_differential(const PolyDiffOp& a) {
    return gerstenhaber_bracket(mu_operator(a.dim(), a.max_y()), a);
}

// Direct evaluation on SM arguments (no dx in the arguments); the
// independent oracle for the insertion calculus.
inline SmElement apply_op(const PolyDiffOp& op, std::span<const SmElement> args) {
    SmElement r(op.dim(), op.max_y());
    for (const auto& [k, c] : op.terms()) {
        if (k.slots.size() != args.size()) continue;
        SmElement prod(op.dim(), op.max_y());
        prod.add(SmKey{k.dx, k.y}, c);
        for (size_t j = 0; j < args.size(); ++j) {
            if (args[j].dim() != op.dim()) throw FamilyMismatch("apply_op: mismatch");
            SmElement der = args[j];
            for (int idx : k.slots[j]) der = partial_y(der, idx);
            prod = graded_mul(prod, der);
            if (prod.is_zero()) break;
        }
        r += prod;
    }
    return r;
}

inline SmElement apply_op(const PolyDiffOp& op, std::initializer_list<SmElement> args) {
    std::vector<SmElement> v(args);
    return apply_op(op, std::span<const SmElement>(v));
}

}  // namespace fedra
