#include <catch2/catch_amalgamated.hpp>

#include "fedra/fedosov.hpp"
#include "fedra/random_gen.hpp"

using namespace fedra;

namespace {

constexpr int D2 = 2;
constexpr int NY = 6;

Connection curved_fixture() {
    Connection c(D2);
    c.set(1, 2, 2, XPoly::variable(D2, 1));  // Gamma^1_{22} = x^1
    return c;
}

}  // namespace

TEST_CASE("nabla on basic elements") {
    Connection conn = curved_fixture();
    // y-independent scalars see only the De Rham part
    SmElement a(D2, NY);
    add_raw(a, {}, {}, XPoly::parse("x1*x2", D2));
    SmElement expect(D2, NY);
    add_raw(expect, {1}, {}, XPoly::parse("x2", D2));
    add_raw(expect, {2}, {}, XPoly::parse("x1", D2));
    CHECK(nabla(conn, a) == expect);

    // nabla(y^l) picks up the Christoffel term
    SmElement y1(D2, NY);
    add_raw(y1, {}, {1}, XPoly::constant(D2, Rational(1)));
    SmElement expect1(D2, NY);
    add_raw(expect1, {2}, {2}, -XPoly::variable(D2, 1));  // -dx^2 Gamma^1_{22} y^2
    CHECK(nabla(conn, y1) == expect1);
}

TEST_CASE("nabla and delta anticommute") {
    Rng rng(71);
    for (int t = 0; t < 12; ++t) {
        int d = rng.range(2, 3);
        Connection conn = rand_connection(rng, d, 3);
        auto check_family = [&](const auto& el) {
            auto r = delta(nabla(conn, el));
            r += nabla(conn, delta(el));
            CHECK(r.is_zero());
        };
        check_family(rand_sm(rng, d, NY));
        check_family(rand_polyvector(rng, d, NY, 2));
        check_family(rand_polydiffop(rng, d, NY, 2, 2));
        check_family(rand_chain(rng, d, NY, 3));
        check_family(rand_eform(rng, d, NY, 2));
    }
}

TEST_CASE("curvature matches nabla squared") {
    CHECK(curvature(Connection(2), NY).is_zero());

    Rng rng(73);
    for (int t = 0; t < 8; ++t) {
        int d = rng.range(2, 3);
        Connection conn = (t == 0) ? curved_fixture() : rand_connection(rng, d, 3);
        if (t == 0) d = D2;
        PolyVector big_r = curvature(conn, NY);
        // action of the curvature element equals nabla o nabla, per family
        SmElement a = rand_sm(rng, d, NY);
        CHECK((nabla(conn, nabla(conn, a)) - apply_vector_field(big_r, a)).is_zero());
        PolyVector v = rand_polyvector(rng, d, NY, 2);
        CHECK((nabla(conn, nabla(conn, v)) - schouten_bracket(big_r, v)).is_zero());
        PolyDiffOp op = rand_polydiffop(rng, d, NY, 2, 2);
        CHECK((nabla(conn, nabla(conn, op)) - gerstenhaber_bracket(vector_to_operator(big_r), op)).is_zero());
        EForm w = rand_eform(rng, d, NY, 2);
        CHECK((nabla(conn, nabla(conn, w)) - lie_derivative(big_r, w)).is_zero());
        ChainElement ch = rand_chain(rng, d, NY, 3);
        CHECK((nabla(conn, nabla(conn, ch)) - chain_action(vector_to_operator(big_r), ch)).is_zero());
    }
}

TEST_CASE("compute_A: flat fixed point and normalization") {
    FedosovData flat = compute_A(Connection(2), NY);
    CHECK(flat.a_form.is_zero());

    FedosovData fd = compute_A(curved_fixture(), NY);
    CHECK_FALSE(fd.a_form.is_zero());
    CHECK(delta_inv(fd.a_form).is_zero());

    // A lives in Omega^1(T^0): one dx, one xi, y-degree >= 2
    for (const auto& [k, c] : fd.a_form.terms()) {
        CHECK(k.ext() == 1);
        CHECK(k.xi.size() == 1);
        CHECK(k.ydeg() >= 2);
    }

    // leading term equals delta_inv of the curvature element
    PolyVector lead = delta_inv(curvature(curved_fixture(), NY));
    CHECK(fd.a_form.truncated(2) == lead.truncated(2));

    // re-application of the fixed point map is the identity
    PolyVector rhs = schouten_bracket(fd.a_form, fd.a_form);
    rhs *= Rational(1, 2);
    rhs += nabla(fd.conn, fd.a_form);
    PolyVector again = delta_inv(curvature(fd.conn, NY)) + delta_inv(rhs);
    CHECK(again == fd.a_form);
}

TEST_CASE("flat Fedosov differential is d - delta and is exactly flat") {
    FedosovData flat = compute_A(Connection(2), NY);
    SmElement a(D2, NY);
    add_raw(a, {}, {}, XPoly::variable(D2, 1));
    add_raw(a, {}, {1}, XPoly::constant(D2, Rational(1)));
    CHECK(fedosov_D(flat, a).is_zero());

    Rng rng(79);
    for (int t = 0; t < 10; ++t) {
        SmElement s = rand_sm(rng, D2, NY);
        CHECK(fedosov_D(flat, fedosov_D(flat, s)).is_zero());
        ChainElement ch = rand_chain(rng, D2, NY, 3);
        CHECK(fedosov_D(flat, fedosov_D(flat, ch)).is_zero());
    }
}

TEST_CASE("Fedosov differential squares to zero up to the valid degree") {
    Rng rng(83);
    for (int rep = 0; rep < 2; ++rep) {
        int d = (rep == 0) ? D2 : rng.range(2, 3);
        Connection conn = (rep == 0) ? curved_fixture() : rand_connection(rng, d, 2);
        FedosovData fd = compute_A(conn, NY);
        for (int t = 0; t < 4; ++t) {
            CHECK(fedosov_D(fd, fedosov_D(fd, rand_sm(rng, d, NY))).truncated(NY - 2).is_zero());
            CHECK(fedosov_D(fd, fedosov_D(fd, rand_polyvector(rng, d, NY, 2))).truncated(NY - 2).is_zero());
            // first-order operator probes: an order-w slot eats w fiber
            // degrees of A, so ny - 2 is guaranteed only for w <= 1
            CHECK(fedosov_D(fd, fedosov_D(fd, rand_polydiffop(rng, d, NY, 2, 1))).truncated(NY - 2).is_zero());
            CHECK(fedosov_D(fd, fedosov_D(fd, rand_chain(rng, d, NY, 3))).truncated(NY - 2).is_zero());
            CHECK(fedosov_D(fd, fedosov_D(fd, rand_eform(rng, d, NY, 2))).truncated(NY - 2).is_zero());
        }
    }
}

TEST_CASE("fiberwise De Rham anticommutes with D on E-forms") {
    Rng rng(89);
    FedosovData fd = compute_A(curved_fixture(), NY);
    for (int t = 0; t < 10; ++t) {
        EForm w = rand_eform(rng, D2, NY, 2);
        EForm r = fedosov_D(fd, fiber_deRham(w));
        r += fiber_deRham(fedosov_D(fd, w));
        CHECK(r.truncated(NY - 2).is_zero());
    }
}

TEST_CASE("conjugator") {
    // flat case: P = I
    FedosovData flat = compute_A(Connection(2), NY);
    CHECK(conjugator_P(flat) == identity_operator(D2, NY));

    // curved fixture: intertwining residual vanishes through the valid degree
    FedosovData fd = compute_A(curved_fixture(), NY);
    PolyDiffOp p = conjugator_P(fd);
    CHECK(conjugator_residual(fd, p).truncated(NY - 2).is_zero());

    // leading correction is delta_inv(-T)
    PolyDiffOp lead = identity_operator(D2, NY) - delta_inv(local_t_operator(fd));
    CHECK(p.truncated(2) == lead.truncated(2));

    // P = I + higher order terms
    PolyDiffOp diff = p - identity_operator(D2, NY);
    for (const auto& [k, c] : diff.terms()) CHECK(k.ydeg() >= 1);
}
