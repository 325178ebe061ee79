#include <catch2/catch_amalgamated.hpp>

#include "fedra/elements.hpp"
#include "fedra/random_gen.hpp"

using namespace fedra;

namespace {

XPoly xp(const std::string& s, int d) { return XPoly::parse(s, d); }

SmElement sm_term(int d, int ny, std::vector<int> dx, std::vector<int> y, const std::string& coeff) {
    SmElement a(d, ny);
    add_raw(a, std::move(dx), std::move(y), xp(coeff, d));
    return a;
}

}  // namespace

TEST_CASE("rational coefficients are canonical") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(to_string(rat(-6, 4)) == "-3/2");
    CHECK(denominator(rat(3, -6)) > 0);
}

TEST_CASE("polynomial grammar round-trips") {
    XPoly p = xp("3/2*x1^2*x2 - x3", 3);
    CHECK(p.str() == "-x3 + 3/2*x1^2*x2");
    CHECK(XPoly::parse(p.str(), 3) == p);
    CHECK(xp(" 3/2 * x1 ^ 2 * x2-x3", 3) == p);
    CHECK(xp("x1*x1", 2) == xp("x1^2", 2));
    CHECK_THROWS_AS(xp("x9", 2), ParseError);
    CHECK_THROWS_AS(xp("3//2", 2), ParseError);
    CHECK(xp("0", 2).is_zero());
}

TEST_CASE("polynomial arithmetic and derivatives") {
    XPoly p = xp("x1^2*x2", 2);
    CHECK(p.dx(1) == xp("2*x1*x2", 2));
    CHECK(p.dx(2) == xp("x1^2", 2));
    CHECK((xp("x1 + x2", 2) * xp("x1 - x2", 2)) == xp("x1^2 - x2^2", 2));
    CHECK(p.substitute({xp("x1 + x2", 2), xp("x2", 2)}) == xp("x1^2*x2 + 2*x1*x2^2 + x2^3", 2));
}

TEST_CASE("normalize: antisymmetric slots fold signs into coefficients") {
    // one transposition of the dx set
    CHECK(sm_term(2, 6, {2, 1}, {}, "1") == sm_term(2, 6, {1, 2}, {}, "-1"));
    // repeated dx index annihilates
    SmElement a(2, 6);
    add_raw(a, {1, 1}, {}, xp("1", 2));
    CHECK(a.is_zero());
    // canonical rationals at entry
    CHECK(sm_term(2, 6, {}, {}, "2/4") == sm_term(2, 6, {}, {}, "1/2"));
    // out-of-range index
    SmElement b(2, 6);
    CHECK_THROWS_AS(add_raw(b, {3}, {}, xp("1", 2)), IndexError);
}

TEST_CASE("normalize is idempotent over permutations") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        std::vector<int> dx = {1, 2, 3};
        for (int i = 2; i > 0; --i) std::swap(dx[i], dx[rng.range(0, i)]);
        EForm e1(3, 6), e2(3, 6);
        add_raw(e1, dx, {1}, {2, 1}, XPoly::constant(3, Rational(1)));
        add_raw(e2, {1, 2, 3}, {1}, {1, 2}, XPoly::constant(3, Rational(1)));
        // the two must agree up to the sign of sorting dx and the C pair
        int sgn_dx = 1;
        {
            std::vector<int> v = dx;
            sgn_dx = sort_antisym(v);
        }
        EForm lhs = e1;
        if (sgn_dx < 0) lhs *= Rational(-1);
        CHECK(lhs == (Rational(-1) * e2));  // C-set (2,1) -> (1,2) contributes -1
    }
}

TEST_CASE("graded_mul: dx anticommutation") {
    SmElement dx1 = sm_term(2, 6, {1}, {}, "1");
    SmElement dx2 = sm_term(2, 6, {2}, {}, "1");
    CHECK(graded_mul(dx1, dx2) == sm_term(2, 6, {1, 2}, {}, "1"));
    CHECK(graded_mul(dx2, dx1) == sm_term(2, 6, {1, 2}, {}, "-1"));
    SmElement y1 = sm_term(2, 6, {}, {1}, "1");
    CHECK(graded_mul(y1, y1) == sm_term(2, 6, {}, {1, 1}, "1"));
}

TEST_CASE("graded_mul: C against dx convention") {
    EForm c1(2, 6), dx2(2, 6);
    add_raw(c1, {}, {}, {1}, XPoly::constant(2, Rational(1)));
    add_raw(dx2, {2}, {}, {}, XPoly::constant(2, Rational(1)));
    EForm lhs = graded_mul(c1, dx2);
    EForm rhs = graded_mul(dx2, c1);
    CHECK(lhs == (Rational(-1) * rhs));
}

TEST_CASE("graded_mul supercommutativity on random elements") {
    Rng rng(11);
    for (int t = 0; t < 60; ++t) {
        int d = rng.range(2, 3);
        EForm a = rand_eform(rng, d, 6, 2);
        EForm b = rand_eform(rng, d, 6, 2);
        for (const auto& [ka, ca] : a.terms())
            for (const auto& [kb, cb] : b.terms()) {
                EForm ta(d, 6), tb(d, 6);
                ta.add(ka, ca);
                tb.add(kb, cb);
                int pa = (int)ka.c.size() + ka.ext();
                int pb = (int)kb.c.size() + kb.ext();
                EForm diff = graded_mul(ta, tb) - Rational(pow_sign(pa * pb)) * graded_mul(tb, ta);
                CHECK(diff.is_zero());
            }
    }
}

TEST_CASE("truncation") {
    SmElement a = sm_term(2, 6, {}, {1}, "1") + sm_term(2, 6, {}, {1, 1, 1}, "1");
    CHECK(a.truncated(2) == sm_term(2, 6, {}, {1}, "1"));
    CHECK(a.truncated(2).truncated(2) == a.truncated(2));
    SmElement z(2, 6);
    CHECK(z.truncated(3).is_zero());
}

TEST_CASE("truncation is an algebra congruence") {
    Rng rng(13);
    for (int t = 0; t < 40; ++t) {
        SmElement a = rand_sm(rng, 2, 8);
        SmElement b = rand_sm(rng, 2, 8);
        int n = rng.range(0, 5);
        CHECK(graded_mul(a, b).truncated(n) ==
              graded_mul(a.truncated(n), b.truncated(n)).truncated(n));
    }
}

TEST_CASE("partial derivatives") {
    CHECK(partial_x(sm_term(2, 6, {}, {}, "x1*x2"), 1) == sm_term(2, 6, {}, {}, "x2"));
    CHECK(partial_y(sm_term(2, 6, {}, {1, 1, 2}, "1"), 1) == sm_term(2, 6, {}, {1, 2}, "2"));
    CHECK(partial_y(sm_term(2, 6, {}, {1}, "1"), 2).is_zero());
}

TEST_CASE("partials commute across distinct indices") {
    Rng rng(17);
    for (int t = 0; t < 40; ++t) {
        SmElement a = rand_sm(rng, 3, 6);
        CHECK(partial_y(partial_y(a, 1), 2) == partial_y(partial_y(a, 2), 1));
        CHECK(partial_x(partial_x(a, 1), 3) == partial_x(partial_x(a, 3), 1));
    }
}

TEST_CASE("series add drops beyond-truncation terms") {
    SmElement a(2, 2);
    add_raw(a, {}, {1, 1, 1}, XPoly::constant(2, Rational(1)));
    CHECK(a.is_zero());
}
