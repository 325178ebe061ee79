#pragma once

#include "fedra/dgla_instances.hpp"

namespace fedra {

// Desk-scale deformation quantization with a constant Poisson structure:
// the Moyal star product as a truncated series of rank-2 fiberwise
// operators, its Maurer-Cartan difference with the pointwise multiplication,
// and the twisted chain and form differentials it induces.

// Constant antisymmetric bivector matrix, stored upper-triangular.
class ConstPoisson {
  public:
    explicit ConstPoisson(int dim) : dim_(dim) {}

    int dim() const { return dim_; }

    void set(int i, int j, const Rational& v) {
        if (i < 1 || i > dim_ || j < 1 || j > dim_ || i == j)
            throw IndexError("ConstPoisson: bad index pair");
        if (i < j)
            entries_[{i, j}] = v;
        else
            entries_[{j, i}] = -v;
    }

    Rational theta(int i, int j) const {
        if (i == j) return Rational(0);
        auto it = entries_.find(i < j ? std::pair{i, j} : std::pair{j, i});
        if (it == entries_.end()) return Rational(0);
        return i < j ? it->second : -it->second;
    }

    bool is_zero() const {
        for (const auto& [k, v] : entries_)
            if (v != 0) return false;
        return true;
    }

    // the bivector (1/2) theta^{ij} xi_i xi_j as a fiberwise polyvector
    PolyVector bivector(int ny) const {
        PolyVector b(dim_, ny);
        for (const auto& [k, v] : entries_) {
            if (v == 0) continue;
            b.add(TKey{{}, {}, {k.first, k.second}}, XPoly::constant(dim_, v));
        }
        return b;
    }

  private:
    int dim_;
    std::map<std::pair<int, int>, Rational> entries_;
};

struct StarProduct {
    int dim;
    int ny;
    HbarSeries<PolyDiffOp> pi;  // rank-2 components; pi[0] is the multiplication

    // Psi = Pi - mu, the Maurer-Cartan element of the deformation.
    HbarSeries<PolyDiffOp> deformation_part() const {
        HbarSeries<PolyDiffOp> psi = pi;
        psi[0] = PolyDiffOp(dim, ny);
        return psi;
    }
};

// Pi_k = (1/k!) (1/2)^k theta^{i1 j1} ... theta^{ik jk}
//        d_{i1..ik} (x) d_{j1..jk},  Pi_0 = mu.
inline StarProduct moyal_product(const ConstPoisson& th, int nhbar, int ny) {
    int d = th.dim();
    StarProduct star{d, ny, HbarSeries<PolyDiffOp>(nhbar, PolyDiffOp(d, ny))};
    star.pi[0] = mu_operator(d, ny);

    // accumulate theta-contractions power by power
    std::map<std::pair<YMulti, YMulti>, Rational> level{{{YMulti{}, YMulti{}}, Rational(1)}};
    for (int k = 1; k <= nhbar; ++k) {
        std::map<std::pair<YMulti, YMulti>, Rational> next;
        for (const auto& [slots, coeff] : level)
            for (int i = 1; i <= d; ++i)
                for (int j = 1; j <= d; ++j) {
                    Rational t = th.theta(i, j);
                    if (t == 0) continue;
                    auto key = std::pair{merge_sym(slots.first, {i}), merge_sym(slots.second, {j})};
                    auto [it, fresh] = next.emplace(key, Rational(0));
                    it->second += coeff * t * Rational(1, 2);
                    (void)fresh;
                }
        level = std::move(next);
        PolyDiffOp comp(d, ny);
        Rational inv_fact = Rational(1) / factorial(k);
        for (const auto& [slots, coeff] : level)
            comp.add(DKey{{}, {}, {slots.first, slots.second}},
                     XPoly::constant(d, coeff * inv_fact));
        star.pi[k] = comp;
        if (level.empty()) break;
    }
    return star;
}

// The star product evaluated on two fiber polynomials.
inline HbarSeries<SmElement> star_apply(const StarProduct& star, const SmElement& a,
                                        const SmElement& b) {
    HbarSeries<SmElement> r(star.pi.order(), SmElement(star.dim, star.ny));
    for (int k = 0; k <= star.pi.order(); ++k) {
        if (star.pi[k].is_zero()) continue;
        r[k] = apply_op(star.pi[k], {a, b});
    }
    return r;
}

// dPsi + (1/2)[Psi, Psi]; identically zero iff Pi is associative through the
// truncation order.
inline HbarSeries<PolyDiffOp> star_mc_check(const StarProduct& star) {
    auto L = hbar_dgla(dpoly_dgla(star.dim, star.ny), star.pi.order());
    return mc_residual(L, star.deformation_part());
}

// R_Pi = b + R_Psi acting on hbar-series of chains: the arity-0 map of the
// chain module twisted by Psi.
inline std::function<HbarSeries<ChainElement>(const HbarSeries<ChainElement>&)>
twisted_chain_differential(const StarProduct& star) {
    if (!star_mc_check(star).is_zero())
        throw Error("twisted_chain_differential: star product is not associative");
    auto phi = twist_module(chain_module(star.dim, star.ny), star.deformation_part(),
                            ChainElement(star.dim, star.ny));
    return [phi](const HbarSeries<ChainElement>& v) { return phi.apply(0, {}, v); };
}

// L_alpha on hbar-series of fiberwise forms; alpha must be Poisson through
// the truncation order.
inline std::function<HbarSeries<EForm>(const HbarSeries<EForm>&)> twisted_form_differential(
    const HbarSeries<PolyVector>& alpha, int dim, int ny) {
    HbarSeries<PolyVector> self(alpha.order(), PolyVector(dim, ny));
    self = hbar_convolve([](const PolyVector& a, const PolyVector& b) { return schouten_bracket(a, b); },
                         alpha, alpha, PolyVector(dim, ny));
    if (!self.is_zero())
        throw Error("twisted_form_differential: element is not Poisson at the requested order");
    return [alpha, dim, ny](const HbarSeries<EForm>& w) {
        return hbar_convolve([](const PolyVector& g, const EForm& u) { return lie_derivative(g, u); },
                             alpha, w, EForm(dim, ny));
    };
}

}  // namespace fedra
