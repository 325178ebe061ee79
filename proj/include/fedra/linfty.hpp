#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fedra/hbar.hpp"

namespace fedra {

// Homotopy-Lie machinery over arity-indexed structure-map tables: Maurer-
// Cartan residuals, twisting of differentials / morphisms / modules, and
// probe-based checkers for the quadratic relations.
//
// Sign bookkeeping: permutations of probes cross with the suspended parity
// deg + 1, while the structure maps, the differential and the bracket enter
// plainly. The Jacobi suites, the DG-module instances, and the Maurer-Cartan
// pushforward pin this convention uniquely within the standard sign family.
// Module structures are checked through their induced morphism into the
// endomorphism algebra of the module, which carries the differential
// O -> b O - (-)^{|O|} O b and the graded commutator bracket.

template <class E>
struct Probe {
    E el;
    int deg;
};

// Degree-aware DGLA operations; the degree arguments matter only for
// operator-valued carriers.
template <class E>
struct DglaOps {
    std::function<E()> zero;
    std::function<E(const E&, int)> diff;
    std::function<E(const E&, int, const E&, int)> bracket;
};

// ---------------------------------------------------------------------------
// Maurer-Cartan elements.

template <class E>
E mc_residual(const DglaOps<E>& L, const E& pi, int deg = 1) {
    E r = L.diff(pi, deg);
    r += Rational(1, 2) * L.bracket(pi, deg, pi, deg);
    return r;
}

// d + [pi, .]; the caller asserts mc_residual(pi) = 0 beforehand.
template <class E>
std::function<E(const E&, int)> twist_differential(const DglaOps<E>& L, const E& pi,
                                                   int pi_deg = 1) {
    if (!mc_residual(L, pi, pi_deg).is_zero())
        throw Error("twist_differential: element does not satisfy the Maurer-Cartan equation");
    return [L, pi, pi_deg](const E& x, int degx) {
        E r = L.diff(x, degx);
        r += L.bracket(pi, pi_deg, x, degx);
        return r;
    };
}

// ---------------------------------------------------------------------------
// Structure-map tables.

template <class In, class Out>
struct MorphismTable {
    int cutoff = 0;
    // when false, arities beyond the cutoff are unknown rather than zero and
    // sums reaching past the table raise CapacityError
    bool complete = true;
    // maps[n] realizes the arity-n structure map; maps[0] unused
    std::vector<std::function<Out(std::span<const In>)>> maps;

    Out apply(int n, std::span<const In> args) const {
        if (n < 1 || n > cutoff || !maps[(size_t)n]) throw CapacityError("morphism arity exceeded", "arity");
        return maps[(size_t)n](args);
    }
    bool has(int n) const { return n >= 1 && n <= cutoff && (bool)maps[(size_t)n]; }
};

template <class G, class V>
struct ModuleTable {
    int cutoff = 0;  // highest arity in gamma-arguments
    bool complete = true;
    // maps[n] realizes phi_n(g_1..g_n, v); maps[0] is the differential
    std::vector<std::function<V(std::span<const G>, const V&)>> maps;

    V apply(int n, std::span<const G> gs, const V& v) const {
        if (n < 0 || n > cutoff || !maps[(size_t)n]) throw CapacityError("module arity exceeded", "arity");
        return maps[(size_t)n](gs, v);
    }
    bool has(int n) const { return n >= 0 && n <= cutoff && (bool)maps[(size_t)n]; }
};

template <class G, class M, class N>
struct ModuleMorTable {
    int cutoff = 0;
    bool complete = true;
    // maps[n] realizes kappa_n(g_1..g_n, v)
    std::vector<std::function<N(std::span<const G>, const M&)>> maps;

    N apply(int n, std::span<const G> gs, const M& v) const {
        if (n < 0 || n > cutoff || !maps[(size_t)n])
            throw CapacityError("module morphism arity exceeded", "arity");
        return maps[(size_t)n](gs, v);
    }
    bool has(int n) const { return n >= 0 && n <= cutoff && (bool)maps[(size_t)n]; }
};

// ---------------------------------------------------------------------------
// Suspended-sign helpers.

namespace linfty_detail {

// Koszul sign for pulling the marked indices to the front, suspended parity.
inline int extraction_sign(const std::vector<int>& subset, std::span<const int> degs) {
    int sign = 1;
    for (size_t a = 0; a < subset.size(); ++a) {
        int i = subset[a];
        for (int j = (int)(a ? subset[a - 1] + 1 : 0); j < i; ++j) {
            bool in_subset = false;
            for (size_t b = a + 1; b < subset.size(); ++b)
                if (subset[b] == j) in_subset = true;
            if (in_subset) continue;
            sign *= pow_sign((degs[(size_t)i] + 1) * (degs[(size_t)j] + 1));
        }
    }
    return sign;
}

// Exponent family for the suspension isomorphism; the coefficients are
// pinned by the DGLA/DG-module instances and the Maurer-Cartan pushforward.
#ifndef FEDRA_DECALAGE_A
#define FEDRA_DECALAGE_A 0
#define FEDRA_DECALAGE_B 1
#define FEDRA_DECALAGE_C 0
#endif

#ifndef FEDRA_Q2S
#define FEDRA_Q2S 0
#define FEDRA_Q2T 0
#define FEDRA_PAIR 0
#endif

inline int source_q2_sign(int ka, int kb) {
    (void)kb;
    return FEDRA_Q2S == 0 ? pow_sign(ka) : 1;
}
inline int target_q2_sign(int da, int db) {
    if (FEDRA_Q2T == 0) return pow_sign(da);
    if (FEDRA_Q2T == 2) return pow_sign(db);
    return 1;
}
inline int pair_term_sign() { return FEDRA_PAIR == 0 ? 1 : -1; }

inline int decalage_sign(std::span<const int> degs) {
    int m = (int)degs.size();
    int e = FEDRA_DECALAGE_A * (m * (m - 1) / 2);
    for (int i = 0; i < m; ++i) e += FEDRA_DECALAGE_B * (m - 1 - i) * degs[(size_t)i];
    for (int i = 0; i < m; ++i) e += FEDRA_DECALAGE_C * i * degs[(size_t)i];
    return pow_sign(e);
}

inline void subsets_of_size(int n, int l, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> pick((size_t)l);
    std::function<void(int, int)> rec = [&](int start, int got) {
        if (got == l) {
            fn(pick);
            return;
        }
        for (int i = start; i <= n - (l - got); ++i) {
            pick[(size_t)got] = i;
            rec(i + 1, got + 1);
        }
    };
    if (l == 0)
        fn({});
    else
        rec(0, 0);
}

}  // namespace linfty_detail

// ---------------------------------------------------------------------------
// Quadratic-relation residuals.

// The three lowest structure-map relations of a homotopy Lie table: the
// differential squares to zero, the Leibniz rule, and the Jacobi identity up
// to the arity-3 correction.
template <class E>
struct AlgebraTable {
    std::function<E(const E&)> q1;
    std::function<E(const E&, const E&)> q2;
    std::function<E(const E&, const E&, const E&)> q3;  // optional
};

template <class E>
E algebra_residual_arity1(const AlgebraTable<E>& Q, const Probe<E>& g) {
    return Q.q1(Q.q1(g.el));
}

template <class E>
E algebra_residual_arity2(const AlgebraTable<E>& Q, const Probe<E>& g1, const Probe<E>& g2) {
    E r = Q.q1(Q.q2(g1.el, g2.el));
    r -= Q.q2(Q.q1(g1.el), g2.el);
    r -= Rational(pow_sign(g1.deg)) * Q.q2(g1.el, Q.q1(g2.el));
    return r;
}

template <class E>
E algebra_residual_arity3(const AlgebraTable<E>& Q, const Probe<E>& g1, const Probe<E>& g2,
                          const Probe<E>& g3) {
    E r = Rational(pow_sign(g1.deg * g3.deg)) * Q.q2(Q.q2(g1.el, g2.el), g3.el);
    r += Rational(pow_sign(g2.deg * g1.deg)) * Q.q2(Q.q2(g2.el, g3.el), g1.el);
    r += Rational(pow_sign(g3.deg * g2.deg)) * Q.q2(Q.q2(g3.el, g1.el), g2.el);
    if (Q.q3) {
        r -= Q.q1(Q.q3(g1.el, g2.el, g3.el));
        r -= Q.q3(Q.q1(g1.el), g2.el, g3.el);
        r -= Rational(pow_sign(g1.deg)) * Q.q3(g1.el, Q.q1(g2.el), g3.el);
        r -= Rational(pow_sign(g1.deg + g2.deg)) * Q.q3(g1.el, g2.el, Q.q1(g3.el));
    }
    return r;
}

// Residual of the morphism relation at arity n on the given probes; zero for
// every arity <= cutoff iff the table is a homotopy morphism there.
template <class In, class Out>
Out morphism_residual(const MorphismTable<In, Out>& F, const DglaOps<In>& L, const DglaOps<Out>& Lo,
                      std::span<const Probe<In>> g) {
    using linfty_detail::extraction_sign;
    using linfty_detail::subsets_of_size;

    int n = (int)g.size();
    std::vector<int> degs((size_t)n);
    for (int i = 0; i < n; ++i) degs[(size_t)i] = g[(size_t)i].deg;

    auto f_apply = [&](std::span<const Probe<In>> args) {
        std::vector<In> els;
        for (const auto& p : args) els.push_back(p.el);
        return F.apply((int)args.size(), std::span<const In>(els));
    };
    auto out_degree = [&](const std::vector<int>& idx) {
        int dsum = 1 - (int)idx.size();
        for (int i : idx) dsum += degs[(size_t)i];
        return dsum;
    };

    Out residual = Lo.zero();

    // source side: blocks through q_1 and q_2
    for (int l = 1; l <= std::min(n, 2); ++l) {
        subsets_of_size(n, l, [&](const std::vector<int>& idx) {
            int kappa = extraction_sign(idx, std::span<const int>(degs));
            Probe<In> block{L.zero(), 0};
            if (l == 1) {
                const Probe<In>& a = g[(size_t)idx[0]];
                block = Probe<In>{L.diff(a.el, a.deg), a.deg + 1};
            } else {
                const Probe<In>& a = g[(size_t)idx[0]];
                const Probe<In>& b = g[(size_t)idx[1]];
                In br = L.bracket(a.el, a.deg, b.el, b.deg);
                block = Probe<In>{std::move(br), a.deg + b.deg + 1};
            }
            std::vector<Probe<In>> args{block};
            for (int i = 0; i < n; ++i) {
                bool used = false;
                for (int j : idx) used |= (i == j);
                if (!used) args.push_back(g[(size_t)i]);
            }
            if (!F.has((int)args.size())) return;
            Out val = f_apply(std::span<const Probe<In>>(args));
            if (kappa < 0) val = Rational(-1) * val;
            residual += val;
        });
    }

    // target side: q1 of F_n plus the pairwise bracket sum
    if (F.has(n)) {
        std::vector<int> all((size_t)n);
        for (int i = 0; i < n; ++i) all[(size_t)i] = i;
        residual -= Lo.diff(f_apply(g), out_degree(all));
    }
    for (int l = 1; l <= n - 1; ++l) {
        subsets_of_size(n, l, [&](const std::vector<int>& idx) {
            if (idx.empty() || idx[0] != 0) return;  // unordered pairs: block one holds probe 0
            std::vector<int> rest;
            for (int i = 0; i < n; ++i) {
                bool used = false;
                for (int j : idx) used |= (i == j);
                if (!used) rest.push_back(i);
            }
            if (!F.has((int)idx.size()) || !F.has((int)rest.size())) return;
            // sign of splitting the word into (idx | rest), both in order
            std::vector<int> concat = idx;
            concat.insert(concat.end(), rest.begin(), rest.end());
            int kappa = 1;
            {
                // bubble the concatenated order back to identity
                std::vector<int> w = concat;
                for (size_t a = 0; a < w.size(); ++a)
                    for (size_t b = a + 1; b < w.size(); ++b)
                        if (w[a] > w[b])
                            kappa *= pow_sign((degs[(size_t)w[a]] + 1) * (degs[(size_t)w[b]] + 1));
            }
            std::vector<Probe<In>> ga, gb;
            for (int i : idx) ga.push_back(g[(size_t)i]);
            for (int i : rest) gb.push_back(g[(size_t)i]);
            Out fa = f_apply(std::span<const Probe<In>>(ga));
            Out fb = f_apply(std::span<const Probe<In>>(gb));
            Out br = Lo.bracket(fa, out_degree(idx), fb, out_degree(rest));
            if (kappa < 0) br = Rational(-1) * br;
            residual -= br;
        });
    }
    return residual;
}

// ---------------------------------------------------------------------------
// Endomorphism carrier for the module reduction.

template <class V>
struct EndOp {
    std::function<V(const V&)> f;  // empty = zero operator

    V operator()(const V& v, const V& vzero) const { return f ? f(v) : vzero; }

    EndOp operator+(const EndOp& o) const {
        if (!f) return o;
        if (!o.f) return *this;
        auto a = f, b = o.f;
        return EndOp{[a, b](const V& v) { return a(v) + b(v); }};
    }
    EndOp operator-(const EndOp& o) const { return *this + (Rational(-1) * o); }
    EndOp& operator+=(const EndOp& o) { return *this = *this + o; }
    EndOp& operator-=(const EndOp& o) { return *this = *this - o; }
    friend EndOp operator*(const Rational& r, const EndOp& o) {
        if (!o.f || r == 0) return EndOp{};
        auto b = o.f;
        return EndOp{[r, b](const V& v) { return r * b(v); }};
    }
    friend EndOp operator*(const EndOp& o, const Rational& r) { return r * o; }
};

// DGLA structure on module endomorphisms induced by the differential phi_0.
template <class V>
DglaOps<EndOp<V>> end_dgla(std::function<V(const V&)> phi0) {
    DglaOps<EndOp<V>> ops;
    ops.zero = [] { return EndOp<V>{}; };
    ops.diff = [phi0](const EndOp<V>& o, int k) {
        if (!o.f) return EndOp<V>{};
        auto f = o.f;
        int s = pow_sign(k);
        return EndOp<V>{[phi0, f, s](const V& v) {
            V r = phi0(f(v));
            V second = f(phi0(v));
            if (s < 0)
                r += second;
            else
                r -= second;
            return r;
        }};
    };
    ops.bracket = [](const EndOp<V>& a, int ka, const EndOp<V>& b, int kb) {
        if (!a.f || !b.f) return EndOp<V>{};
        auto fa = a.f, fb = b.f;
        int s = pow_sign(ka * kb);
        return EndOp<V>{[fa, fb, s](const V& v) {
            V r = fa(fb(v));
            V second = fb(fa(v));
            if (s < 0)
                r += second;
            else
                r -= second;
            return r;
        }};
    };
    return ops;
}

// The morphism into End(M) induced by a module table; a module structure is
// equivalently a homotopy morphism into the endomorphism algebra.
template <class G, class V>
MorphismTable<G, EndOp<V>> module_to_end_morphism(const ModuleTable<G, V>& phi) {
    MorphismTable<G, EndOp<V>> chi;
    chi.cutoff = phi.cutoff;
    chi.maps.resize((size_t)phi.cutoff + 1);
    for (int nn = 1; nn <= phi.cutoff; ++nn) {
        if (!phi.has(nn)) continue;
        chi.maps[(size_t)nn] = [phi, nn](std::span<const G> gs) {
            std::vector<G> copy(gs.begin(), gs.end());
            return EndOp<V>{[phi, nn, copy](const V& v) {
                return phi.apply(nn, std::span<const G>(copy), v);
            }};
        };
    }
    return chi;
}

// ---------------------------------------------------------------------------
// Module-morphism relation. With kappa concentrated in arity 0 this reduces
// to the chain-map and intertwining rows; higher-arity rows follow the same
// suspended bookkeeping as the morphism relation.
template <class G, class M, class N>
N module_mor_residual(const ModuleMorTable<G, M, N>& kappa, const ModuleTable<G, M>& phiM,
                      const ModuleTable<G, N>& phiN, const DglaOps<G>& L,
                      std::span<const Probe<G>> g, const M& v, const N& nzero) {
    using linfty_detail::extraction_sign;
    using linfty_detail::subsets_of_size;

    int n = (int)g.size();
    std::vector<int> degs((size_t)n);
    for (int i = 0; i < n; ++i) degs[(size_t)i] = g[(size_t)i].deg;

    auto gather = [&](const std::vector<int>& idx, std::vector<G>& els, std::vector<int>& ds) {
        for (int i : idx) {
            els.push_back(g[(size_t)i].el);
            ds.push_back(degs[(size_t)i]);
        }
    };
    auto complement = [&](const std::vector<int>& idx) {
        std::vector<int> rest;
        for (int i = 0; i < n; ++i) {
            bool used = false;
            for (int j : idx) used |= (i == j);
            if (!used) rest.push_back(i);
        }
        return rest;
    };

    N residual = nzero;

    // sum over splittings: kappa_(outer) applied after phi^M_(inner),
    // minus phi^N_(outer) applied after kappa_(inner),
    // plus kappa after a source-side q-block.
    for (int l = 0; l <= n; ++l) {
        subsets_of_size(n, l, [&](const std::vector<int>& outer) {
            std::vector<int> inner = complement(outer);
            int kappa_sign = extraction_sign(outer, std::span<const int>(degs));
            int pass = 0;  // inner coderivation (odd) passes the outer block
            for (int i : outer) pass += degs[(size_t)i] + 1;
            int s_pass = pow_sign(pass);

            std::vector<G> oe, ie;
            std::vector<int> od, id;
            gather(outer, oe, od);
            gather(inner, ie, id);

            if (kappa.has((int)outer.size()) && phiM.has((int)inner.size())) {
                // inner phi^M has degree +1 and crosses the outer block
                M mv = phiM.apply((int)inner.size(), std::span<const G>(ie), v);
                N val = kappa.apply((int)outer.size(), std::span<const G>(oe), mv);
                if (kappa_sign * s_pass < 0) val = Rational(-1) * val;
                residual += val;
            }
            if (phiN.has((int)outer.size()) && kappa.has((int)inner.size())) {
                // inner kappa has degree 0: no passing sign
                N nv = kappa.apply((int)inner.size(), std::span<const G>(ie), v);
                N val = phiN.apply((int)outer.size(), std::span<const G>(oe), nv);
                if (kappa_sign < 0) val = Rational(-1) * val;
                residual -= val;
            }
        });
    }

    // source-side q-blocks feeding kappa
    for (int l = 1; l <= std::min(n, 2); ++l) {
        subsets_of_size(n, l, [&](const std::vector<int>& idx) {
            int kap = extraction_sign(idx, std::span<const int>(degs));
            Probe<G> block{L.zero(), 0};
            if (l == 1) {
                const Probe<G>& a = g[(size_t)idx[0]];
                block = Probe<G>{L.diff(a.el, a.deg), a.deg + 1};
            } else {
                const Probe<G>& a = g[(size_t)idx[0]];
                const Probe<G>& b = g[(size_t)idx[1]];
                G br = L.bracket(a.el, a.deg, b.el, b.deg);
                block = Probe<G>{std::move(br), a.deg + b.deg + 1};
            }
            std::vector<G> els{block.el};
            std::vector<int> ds{block.deg};
            for (int i = 0; i < n; ++i) {
                bool used = false;
                for (int j : idx) used |= (i == j);
                if (!used) {
                    els.push_back(g[(size_t)i].el);
                    ds.push_back(degs[(size_t)i]);
                }
            }
            if (!kappa.has((int)els.size())) return;
            (void)ds;
            N val = kappa.apply((int)els.size(), std::span<const G>(els), v);
            if (kap < 0) val = Rational(-1) * val;
            residual -= val;
        });
    }
    return residual;
}

// ---------------------------------------------------------------------------
// Pushforward of a Maurer-Cartan element through a morphism table:
// S = sum_n 1/n! F_n(pi, ..., pi), convergent by the hbar filtration.
template <class In, class Out>
HbarSeries<Out> mc_pushforward(const MorphismTable<In, Out>& F, const HbarSeries<In>& pi,
                               const Out& out_zero) {
    int nh = pi.order();
    int ord = pi.filtration_order();
    HbarSeries<Out> s(nh, out_zero);
    if (ord > nh) return s;
    if (ord < 1) throw Error("mc_pushforward: element must have positive hbar order");
    int max_arity = nh / ord;
    if (max_arity > F.cutoff && !F.complete)
        throw CapacityError("morphism arity cutoff insufficient for the requested hbar order",
                            "arity cutoff " + std::to_string(F.cutoff));
    max_arity = std::min(max_arity, F.cutoff);

    for (int n = 1; n <= max_arity; ++n) {
        if (!F.has(n)) continue;
        // sum over power assignments p_1..p_n with ord <= p_i, sum <= nh
        std::vector<int> powers((size_t)n, ord);
        std::function<void(int, int)> rec = [&](int pos, int used) {
            if (pos == n) {
                std::vector<In> args;
                for (int p : powers) args.push_back(pi[p]);
                Out val = F.apply(n, std::span<const In>(args));
                s[used] += (Rational(1) / factorial(n)) * val;
                return;
            }
            for (int p = ord; used + p + ord * (n - pos - 1) <= nh; ++p) {
                powers[(size_t)pos] = p;
                rec(pos + 1, used + p);
            }
        };
        rec(0, 0);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Twisting of tables by a Maurer-Cartan element. The twisted arity-n map is
//   T^pi_n(g_1..g_n) = sum_k 1/k! T_{n+k}(pi,...,pi, g_1..g_n)
// acting on hbar-series arguments by convolution.

namespace linfty_detail {

// Enumerates k insertions of pi-components plus the fixed argument
// components, calling fn(plain-args, hbar-power, weight).
template <class E, class Fn>
void twisted_sum(const HbarSeries<E>& pi, std::span<const HbarSeries<E>> args, int cutoff,
                 bool complete, int arity, const Fn& fn) {
    int nh = pi.order();
    int ord = pi.filtration_order();
    if (ord < 1 && !pi.is_zero()) throw Error("twisting element must have positive hbar order");
    // choose components of the fixed arguments first
    std::vector<int> comp((size_t)args.size(), 0);
    std::function<void(int, int)> rec_args = [&](int pos, int used) {
        if (pos == (int)args.size()) {
            int budget = nh - used;
            int kmax = (ord > nh) ? 0 : (ord >= 1 ? budget / ord : 0);
            if (!complete && arity + kmax > cutoff)
                throw CapacityError("arity cutoff insufficient for twisting at this hbar order",
                                    "arity cutoff " + std::to_string(cutoff));
            for (int k = 0; k <= kmax && arity + k <= cutoff; ++k) {
                std::vector<int> ppow((size_t)k, ord);
                std::function<void(int, int)> rec_pi = [&](int pp, int pused) {
                    if (pp == k) {
                        std::vector<E> plain;
                        for (int i = 0; i < k; ++i) plain.push_back(pi[ppow[(size_t)i]]);
                        for (size_t i = 0; i < args.size(); ++i) plain.push_back(args[i][comp[i]]);
                        fn(plain, used + pused, Rational(1) / factorial(k));
                        return;
                    }
                    for (int p = ord; pused + p + ord * (k - pp - 1) <= budget; ++p) {
                        ppow[(size_t)pp] = p;
                        rec_pi(pp + 1, pused + p);
                    }
                };
                rec_pi(0, 0);
            }
            return;
        }
        for (int p = 0; used + p <= nh; ++p) {
            if (args[(size_t)pos][p].is_zero()) continue;
            comp[(size_t)pos] = p;
            rec_args(pos + 1, used + p);
        }
    };
    rec_args(0, 0);
}

}  // namespace linfty_detail

template <class In, class Out>
MorphismTable<HbarSeries<In>, HbarSeries<Out>> twist_morphism(const MorphismTable<In, Out>& F,
                                                              const HbarSeries<In>& pi,
                                                              const Out& out_zero) {
    MorphismTable<HbarSeries<In>, HbarSeries<Out>> tw;
    tw.cutoff = F.cutoff;
    tw.maps.resize((size_t)F.cutoff + 1);
    for (int n = 1; n <= F.cutoff; ++n) {
        bool any = false;
        for (int m = n; m <= F.cutoff; ++m) any |= F.has(m);
        if (!any) continue;
        tw.maps[(size_t)n] = [F, pi, out_zero, n](std::span<const HbarSeries<In>> args) {
            HbarSeries<Out> out(pi.order(), out_zero);
            linfty_detail::twisted_sum<In>(pi, args, F.cutoff, F.complete, n,
                                           [&](const std::vector<In>& plain, int power, Rational w) {
                                               int arity = (int)plain.size();
                                               if (!F.has(arity)) return;
                                               Out val = F.apply(arity, std::span<const In>(plain));
                                               out[power] += w * val;
                                           });
            return out;
        };
    }
    return tw;
}

template <class G, class V>
ModuleTable<HbarSeries<G>, HbarSeries<V>> twist_module(const ModuleTable<G, V>& phi,
                                                       const HbarSeries<G>& pi, const V& v_zero) {
    ModuleTable<HbarSeries<G>, HbarSeries<V>> tw;
    tw.cutoff = phi.cutoff;
    tw.maps.resize((size_t)phi.cutoff + 1);
    for (int n = 0; n <= phi.cutoff; ++n) {
        bool any = false;
        for (int m = n; m <= phi.cutoff; ++m) any |= phi.has(m);
        if (!any) continue;
        tw.maps[(size_t)n] = [phi, pi, v_zero, n](std::span<const HbarSeries<G>> gs,
                                                  const HbarSeries<V>& v) {
            HbarSeries<V> out(pi.order(), v_zero);
            for (int vc = 0; vc <= v.order(); ++vc) {
                if (v[vc].is_zero()) continue;
                linfty_detail::twisted_sum<G>(
                    pi, gs, phi.cutoff, phi.complete, n,
                    [&](const std::vector<G>& plain, int power, Rational w) {
                        int arity = (int)plain.size();
                        if (!phi.has(arity) || vc + power > pi.order()) return;
                        V val = phi.apply(arity, std::span<const G>(plain), v[vc]);
                        out[vc + power] += w * val;
                    });
            }
            return out;
        };
    }
    return tw;
}

template <class G, class M, class N>
ModuleMorTable<HbarSeries<G>, HbarSeries<M>, HbarSeries<N>> twist_module_morphism(
    const ModuleMorTable<G, M, N>& kappa, const HbarSeries<G>& pi, const N& n_zero) {
    ModuleMorTable<HbarSeries<G>, HbarSeries<M>, HbarSeries<N>> tw;
    tw.cutoff = kappa.cutoff;
    tw.maps.resize((size_t)kappa.cutoff + 1);
    for (int n = 0; n <= kappa.cutoff; ++n) {
        bool any = false;
        for (int m = n; m <= kappa.cutoff; ++m) any |= kappa.has(m);
        if (!any) continue;
        tw.maps[(size_t)n] = [kappa, pi, n_zero, n](std::span<const HbarSeries<G>> gs,
                                                    const HbarSeries<M>& v) {
            HbarSeries<N> out(pi.order(), n_zero);
            for (int vc = 0; vc <= v.order(); ++vc) {
                if (v[vc].is_zero()) continue;
                linfty_detail::twisted_sum<G>(
                    pi, gs, kappa.cutoff, kappa.complete, n,
                    [&](const std::vector<G>& plain, int power, Rational w) {
                        int arity = (int)plain.size();
                        if (!kappa.has(arity) || vc + power > pi.order()) return;
                        N val = kappa.apply(arity, std::span<const G>(plain), v[vc]);
                        out[vc + power] += w * val;
                    });
            }
            return out;
        };
    }
    return tw;
}

// Composition with a strict morphism on either side (the general composition
// needs no more than this anywhere in the artifact).
template <class In, class Mid, class Out>
MorphismTable<In, Out> compose_morphism(const MorphismTable<Mid, Out>& G,
                                        const MorphismTable<In, Mid>& F) {
    bool g_strict = true, f_strict = true;
    for (int n = 2; n <= G.cutoff; ++n) g_strict &= !G.has(n);
    for (int n = 2; n <= F.cutoff; ++n) f_strict &= !F.has(n);
    if (!g_strict && !f_strict)
        throw Error("compose_morphism: one factor must be a strict homomorphism");

    MorphismTable<In, Out> c;
    c.cutoff = g_strict ? F.cutoff : G.cutoff;
    c.maps.resize((size_t)c.cutoff + 1);
    for (int n = 1; n <= c.cutoff; ++n) {
        if (g_strict) {
            if (!F.has(n)) continue;
            c.maps[(size_t)n] = [G, F, n](std::span<const In> args) {
                Mid mid = F.apply(n, args);
                std::vector<Mid> one{mid};
                return G.apply(1, std::span<const Mid>(one));
            };
        } else {
            if (!G.has(n)) continue;
            c.maps[(size_t)n] = [G, F, n](std::span<const In> args) {
                std::vector<Mid> mids;
                for (const auto& a : args) {
                    std::vector<In> one{a};
                    mids.push_back(F.apply(1, std::span<const In>(one)));
                }
                return G.apply(n, std::span<const Mid>(mids));
            };
        }
    }
    return c;
}

}  // namespace fedra
