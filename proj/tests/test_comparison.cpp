#include <catch2/catch_amalgamated.hpp>

#include "fedra/comparison.hpp"
#include "fedra/chains.hpp"
#include "fedra/random_gen.hpp"

using namespace fedra;

namespace {
constexpr int D = 2;
constexpr int NY = 6;
XPoly one(int d = D) { return XPoly::constant(d, Rational(1)); }
}  // namespace

TEST_CASE("hkr on low degrees") {
    // degree -1: multiplication by the function itself
    PolyVector f(D, NY);
    add_raw(f, {}, {1}, {}, XPoly::parse("x1", D));
    PolyDiffOp expect_f(D, NY);
    add_raw(expect_f, {}, {1}, {}, XPoly::parse("x1", D));
    CHECK(hkr_map(f) == expect_f);

    // a vector becomes the first-order operator
    PolyVector v(D, NY);
    add_raw(v, {}, {}, {1}, one());
    PolyDiffOp expect_v(D, NY);
    add_raw(expect_v, {}, {}, {{1}}, one());
    CHECK(hkr_map(v) == expect_v);

    // a bivector becomes the antisymmetrized bidifferential operator with
    // the idempotent 1/2 weight
    PolyVector b(D, NY);
    add_raw(b, {}, {}, {1, 2}, one());
    PolyDiffOp expect_b(D, NY);
    add_raw(expect_b, {}, {}, {{1}, {2}}, XPoly::constant(D, Rational(1, 2)));
    add_raw(expect_b, {}, {}, {{2}, {1}}, XPoly::constant(D, Rational(-1, 2)));
    CHECK(hkr_map(b) == expect_b);
}

TEST_CASE("hkr lands in cocycles and the skew symbol inverts it") {
    Rng rng(47);
    int done = 0;
    while (done < 50) {
        int d = rng.range(2, 3);
        PolyVector g = rand_polyvector(rng, d, NY, d);
        if (g.is_zero()) continue;
        PolyDiffOp img = hkr_map(g);
        CHECK(cochain_differential(img).is_zero());
        CHECK(skew_symbol(img) == g);
        ++done;
    }
}

TEST_CASE("connes map on small chains") {
    // single slot: rename y_0 to y
    ChainElement c0(D, NY);
    add_raw(c0, {}, {{1, 2}}, XPoly::parse("x2", D));
    EForm e0(D, NY);
    add_raw(e0, {}, {1, 2}, {}, XPoly::parse("x2", D));
    CHECK(connes_map(c0) == e0);

    // two slots: a0 C^i d(a1), slots identified
    ChainElement c1(D, NY);
    add_raw(c1, {}, {{1}, {2, 2}}, one());
    EForm e1(D, NY);
    add_raw(e1, {}, {1, 2}, {2}, XPoly::constant(D, Rational(2)));
    CHECK(connes_map(c1) == e1);
}

TEST_CASE("connes map kills boundaries") {
    Rng rng(53);
    int done = 0;
    while (done < 50) {
        int d = rng.range(2, 3);
        ChainElement a = rand_chain(rng, d, NY, 4);
        if (a.is_zero()) continue;
        CHECK(connes_map(chain_differential(a)).is_zero());
        ++done;
    }
}

TEST_CASE("fiberwise De Rham differential squares to zero") {
    Rng rng(59);
    for (int t = 0; t < 30; ++t) {
        EForm w = rand_eform(rng, rng.range(2, 3), NY, 2);
        CHECK(fiber_deRham(fiber_deRham(w)).is_zero());
    }
}

TEST_CASE("Lie derivative on basic elements") {
    // L_f(w) = (C^i d_i f) w for a degree -1 polyvector f
    Rng rng(61);
    ProbeShape sh{.terms = 2, .max_x_deg = 1, .max_y_deg = 2, .max_dx = 1};
    for (int t = 0; t < 20; ++t) {
        SmElement f0 = rand_sm(rng, D, NY, ProbeShape{.terms = 2, .max_x_deg = 1, .max_y_deg = 2, .max_dx = 0});
        PolyVector f = sm_to_polyvector(f0);
        EForm w = rand_eform(rng, D, NY, 2, sh);
        EForm fw(D, NY);
        // f * w (f is even as a fiber coefficient)
        for (const auto& [kf, cf] : f0.terms())
            for (const auto& [kw, cw] : w.terms())
                fw.add(EKey{kw.dx, merge_sym(kf.y, kw.y), kw.c}, cf * cw);
        EForm df_w(D, NY);
        {
            EForm fe(D, NY);
            for (const auto& [kf, cf] : f0.terms()) fe.add(EKey{{}, kf.y, {}}, cf);
            EForm df = fiber_deRham(fe);
            for (const auto& [kd, cd] : df.terms())
                for (const auto& [kw, cw] : w.terms()) {
                    auto [s, cset] = merge_antisym(kd.c, kw.c);
                    if (s == 0) continue;
                    int cross = pow_sign((int)kd.c.size() * kw.ext());
                    df_w.add(EKey{kw.dx, merge_sym(kd.y, kw.y), cset}, cd * cw * Rational(s * cross));
                }
        }
        CHECK((lie_derivative(f, w) - df_w).is_zero());
    }

    // L_{d/dy1}(y^1 C^2) = C^2
    PolyVector v(D, NY);
    add_raw(v, {}, {}, {1}, one());
    EForm w(D, NY);
    add_raw(w, {}, {1}, {2}, one());
    EForm expect(D, NY);
    add_raw(expect, {}, {}, {2}, one());
    CHECK(lie_derivative(v, w) == expect);

    // constant vector fields differentiate coefficients
    for (int t = 0; t < 10; ++t) {
        EForm u = rand_eform(rng, D, NY, 2, sh);
        EForm got = lie_derivative(v, u);
        CHECK(got == partial_y(u, 1));
    }
}

TEST_CASE("Lie derivative represents the Schouten algebra") {
    constexpr int WIDE = 12;
    ProbeShape sh{.terms = 2, .max_x_deg = 1, .max_y_deg = 2, .max_dx = 1};
    Rng rng(67);
    int done = 0;
    while (done < 50) {
        int d = rng.range(2, 3);
        PolyVector g1 = rand_polyvector_homog(rng, d, WIDE, rng.range(-1, 1), sh);
        PolyVector g2 = rand_polyvector_homog(rng, d, WIDE, rng.range(-1, 1), sh);
        if (g1.is_zero() || g2.is_zero()) continue;
        int k1 = g1.homogeneous_degree();
        int k2 = g2.homogeneous_degree();
        EForm w = rand_eform(rng, d, WIDE, 2, sh);
        EForm lhs = lie_derivative(schouten_bracket(g1, g2), w);
        EForm rhs = lie_derivative(g1, lie_derivative(g2, w));
        rhs -= Rational(pow_sign(k1 * k2)) * lie_derivative(g2, lie_derivative(g1, w));
        CHECK((lhs - rhs).is_zero());
        ++done;
    }
}
