#pragma once

#include <set>

#include "fedra/comparison.hpp"
#include "fedra/dgla_instances.hpp"
#include "fedra/lifts.hpp"
#include "fedra/moyal.hpp"
#include "fedra/random_gen.hpp"
#include "fedra/report.hpp"
#include "fedra/scenario.hpp"

namespace fedra {

// Named verification suites over a scenario. Every check runs on seeded
// probes, reports exact residual summaries, and tags failures with the probe
// index so a run can be replayed from the seed alone.

namespace suites_detail {

template <class Fn>
void run_check(Report& rep, const std::string& name, const std::string& identity, Fn&& fn) {
    CheckTimer timer;
    CheckRecord rec;
    rec.name = name;
    rec.identity = identity;
    fn(rec);
    rec.ms = timer.ms();
    rep.add(rec);
}

// Aggregates a per-probe residual family into one record.
template <class Fn>
void probe_loop(CheckRecord& rec, const Scenario& sc, int count, Fn&& residual_of) {
    rec.pass = true;
    for (int i = 0; i < count; ++i) {
        auto res = residual_of(i);
        if (!res.is_zero()) {
            rec.pass = false;
            rec.residual_terms += (long long)res.term_count();
            rec.max_residual_ydeg = std::max(rec.max_residual_ydeg, res.max_y_degree());
            if (rec.offending.empty())
                rec.offending = "seed=" + std::to_string(sc.seed) + " probe=" + std::to_string(i);
        }
    }
}

}  // namespace suites_detail

inline Report run_homotopy_suite(const Scenario& sc) {
    using suites_detail::probe_loop;
    using suites_detail::run_check;
    Report rep;
    int d = sc.d, ny = sc.ny;
    ProbeShape sh{.terms = 3, .max_x_deg = 3, .max_y_deg = std::min(3, ny - 2), .max_dx = 2};

    run_check(rep, "homotopy.delta_sq", "delta(delta(a)) = 0 on all five families", [&](CheckRecord& r) {
        Rng rng(sc.seed);
        r.pass = true;
        for (int i = 0; i < sc.probes && r.pass; ++i) {
            bool ok = delta(delta(rand_sm(rng, d, ny, sh))).is_zero() &&
                      delta(delta(rand_polyvector(rng, d, ny, 2, sh))).is_zero() &&
                      delta(delta(rand_polydiffop(rng, d, ny, 2, 2, sh))).is_zero() &&
                      delta(delta(rand_chain(rng, d, ny, 3, sh))).is_zero() &&
                      delta(delta(rand_eform(rng, d, ny, 2, sh))).is_zero();
            if (!ok) {
                r.pass = false;
                r.offending = "seed=" + std::to_string(sc.seed) + " probe=" + std::to_string(i);
            }
        }
    });

    run_check(rep, "homotopy.delta_inv_sq", "delta_inv(delta_inv(a)) = 0 on the four form families",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 1);
                  r.pass = true;
                  for (int i = 0; i < sc.probes && r.pass; ++i) {
                      bool ok = delta_inv(delta_inv(rand_sm(rng, d, ny, sh))).is_zero() &&
                                delta_inv(delta_inv(rand_polyvector(rng, d, ny, 2, sh))).is_zero() &&
                                delta_inv(delta_inv(rand_polydiffop(rng, d, ny, 2, 2, sh))).is_zero() &&
                                delta_inv(delta_inv(rand_eform(rng, d, ny, 2, sh))).is_zero();
                      if (!ok) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "homotopy.hodge", "a = sigma(a) + delta(delta_inv(a)) + delta_inv(delta(a))",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 2);
                  r.pass = true;
                  for (int i = 0; i < sc.probes && r.pass; ++i) {
                      bool ok = hodge_residual(rand_sm(rng, d, ny, sh)).is_zero() &&
                                hodge_residual(rand_polyvector(rng, d, ny, 2, sh)).is_zero() &&
                                hodge_residual(rand_polydiffop(rng, d, ny, 2, 2, sh)).is_zero() &&
                                hodge_residual(rand_eform(rng, d, ny, 2, sh)).is_zero();
                      if (!ok) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "homotopy.chain_hodge", "(delta h + h delta) b = b on exterior degree >= 1",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 3);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      ChainElement a = rand_chain(rng, d, ny, 3, sh);
                      ChainElement pos(d, ny);
                      for (const auto& [k, c] : a.terms())
                          if (k.ext() >= 1 && k.ydeg() <= ny - 1) pos.add(k, c);
                      return chain_hodge_residual(pos);
                  });
              });
    return rep;
}

inline Report run_bracket_suite(const Scenario& sc) {
    using suites_detail::probe_loop;
    using suites_detail::run_check;
    Report rep;
    int d = sc.d;
    // a truncation wide enough to contain every intermediate, so the graded
    // identities are exact statements rather than valid-below-degree ones
    int wide = std::max(sc.ny, 12);
    ProbeShape sh{.terms = 3, .max_x_deg = 2, .max_y_deg = 2, .max_dx = 2};

    run_check(rep, "bracket.gerstenhaber_jacobi",
              "(-)^{k1 k3}[[F1,F2],F3] + cyclic = 0 for the Gerstenhaber bracket",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 10);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      PolyDiffOp p1 = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      PolyDiffOp p2 = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      PolyDiffOp p3 = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      int k1 = p1.homogeneous_degree(), k2 = p2.homogeneous_degree(),
                          k3 = p3.homogeneous_degree();
                      PolyDiffOp jac = Rational(pow_sign(k1 * k3)) *
                                       gerstenhaber_bracket(gerstenhaber_bracket(p1, p2), p3);
                      jac += Rational(pow_sign(k2 * k1)) *
                             gerstenhaber_bracket(gerstenhaber_bracket(p2, p3), p1);
                      jac += Rational(pow_sign(k3 * k2)) *
                             gerstenhaber_bracket(gerstenhaber_bracket(p3, p1), p2);
                      return jac;
                  });
              });

    run_check(rep, "bracket.gerstenhaber_antisym",
              "[F1,F2] + (-)^{k1 k2}[F2,F1] = 0 for the Gerstenhaber bracket", [&](CheckRecord& r) {
                  Rng rng(sc.seed + 11);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      PolyDiffOp p1 = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      PolyDiffOp p2 = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      return gerstenhaber_bracket(p1, p2) +
                             Rational(pow_sign(p1.homogeneous_degree() * p2.homogeneous_degree())) *
                                 gerstenhaber_bracket(p2, p1);
                  });
              });

    run_check(rep, "bracket.schouten_jacobi", "graded Jacobi for the Schouten bracket",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 12);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      PolyVector g1 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 2), sh);
                      PolyVector g2 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 2), sh);
                      PolyVector g3 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 2), sh);
                      if (g1.is_zero() || g2.is_zero() || g3.is_zero()) return PolyVector(d, wide);
                      int k1 = g1.homogeneous_degree(), k2 = g2.homogeneous_degree(),
                          k3 = g3.homogeneous_degree();
                      PolyVector jac =
                          Rational(pow_sign(k1 * k3)) * schouten_bracket(schouten_bracket(g1, g2), g3);
                      jac += Rational(pow_sign(k2 * k1)) * schouten_bracket(schouten_bracket(g2, g3), g1);
                      jac += Rational(pow_sign(k3 * k2)) * schouten_bracket(schouten_bracket(g3, g1), g2);
                      return jac;
                  });
              });

    run_check(rep, "bracket.schouten_antisym", "graded antisymmetry for the Schouten bracket",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 13);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      PolyVector g1 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 2), sh);
                      PolyVector g2 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 2), sh);
                      if (g1.is_zero() || g2.is_zero()) return PolyVector(d, wide);
                      return schouten_bracket(g1, g2) +
                             Rational(pow_sign(g1.homogeneous_degree() * g2.homogeneous_degree())) *
                                 schouten_bracket(g2, g1);
                  });
              });

    run_check(rep, "bracket.cochain_dsq", "the Hochschild cochain differential squares to zero",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 14);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      return cochain_differential(cochain_differential(rand_polydiffop(rng, d, wide, 2, 2, sh)));
                  });
              });

    run_check(rep, "bracket.chain_bsq", "the Hochschild boundary squares to zero", [&](CheckRecord& r) {
        Rng rng(sc.seed + 15);
        probe_loop(r, sc, sc.probes, [&](int) {
            return chain_differential(chain_differential(rand_chain(rng, d, wide, 4, sh)));
        });
    });

    run_check(rep, "bracket.module_axiom",
              "R_{[F1,F2]} = R_{F1} R_{F2} - (-)^{k1 k2} R_{F2} R_{F1}", [&](CheckRecord& r) {
                  Rng rng(sc.seed + 16);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      PolyDiffOp p1 = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      PolyDiffOp p2 = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      ChainElement a = rand_chain(rng, d, wide, 4, sh);
                      int k1 = p1.homogeneous_degree(), k2 = p2.homogeneous_degree();
                      ChainElement lhs = chain_action(gerstenhaber_bracket(p1, p2), a);
                      ChainElement rhs = chain_action(p1, chain_action(p2, a));
                      rhs -= Rational(pow_sign(k1 * k2)) * chain_action(p2, chain_action(p1, a));
                      return lhs - rhs;
                  });
              });

    run_check(rep, "bracket.action_compat",
              "R_{dF} = b R_F - (-)^k R_F b links the two differentials", [&](CheckRecord& r) {
                  Rng rng(sc.seed + 17);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      PolyDiffOp p = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                      ChainElement a = rand_chain(rng, d, wide, 4, sh);
                      ChainElement lhs = chain_action(cochain_differential(p), a);
                      ChainElement rhs = chain_differential(chain_action(p, a));
                      rhs -= Rational(pow_sign(p.homogeneous_degree())) *
                             chain_action(p, chain_differential(a));
                      return lhs - rhs;
                  });
              });
    return rep;
}

inline Report run_comparison_suite(const Scenario& sc) {
    using suites_detail::probe_loop;
    using suites_detail::run_check;
    Report rep;
    int d = sc.d;
    int wide = std::max(sc.ny, 12);
    ProbeShape sh{.terms = 2, .max_x_deg = 2, .max_y_deg = 2, .max_dx = 1};

    run_check(rep, "compare.hkr_cocycle", "the Vey map lands in Hochschild cocycles",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 20);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      return cochain_differential(hkr_map(rand_polyvector(rng, d, wide, d, sh)));
                  });
              });

    run_check(rep, "compare.hkr_symbol", "total skew symbol inverts the Vey map", [&](CheckRecord& r) {
        Rng rng(sc.seed + 21);
        probe_loop(r, sc, sc.probes, [&](int) {
            PolyVector g = rand_polyvector(rng, d, wide, d, sh);
            return skew_symbol(hkr_map(g)) - g;
        });
    });

    run_check(rep, "compare.connes_boundaries", "the Connes map kills Hochschild boundaries",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 22);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      return connes_map(chain_differential(rand_chain(rng, d, wide, 4, sh)));
                  });
              });

    run_check(rep, "compare.lie_representation",
              "L_{[g1,g2]} equals the graded commutator of Lie derivatives", [&](CheckRecord& r) {
                  Rng rng(sc.seed + 23);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      PolyVector g1 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 1), sh);
                      PolyVector g2 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 1), sh);
                      if (g1.is_zero() || g2.is_zero()) return EForm(d, wide);
                      int k1 = g1.homogeneous_degree(), k2 = g2.homogeneous_degree();
                      EForm w = rand_eform(rng, d, wide, 2, sh);
                      EForm lhs = lie_derivative(schouten_bracket(g1, g2), w);
                      EForm rhs = lie_derivative(g1, lie_derivative(g2, w));
                      rhs -= Rational(pow_sign(k1 * k2)) * lie_derivative(g2, lie_derivative(g1, w));
                      return lhs - rhs;
                  });
              });
    return rep;
}

inline Report run_fedosov_suite(const Scenario& sc) {
    using suites_detail::probe_loop;
    using suites_detail::run_check;
    Report rep;
    int d = sc.d, ny = sc.ny;
    ProbeShape sh{.terms = 2, .max_x_deg = 2, .max_y_deg = 2, .max_dx = 1};
    Connection conn = sc.connection();
    FedosovData fd = compute_A(conn, ny);

    {
        std::ostringstream os;
        os << fd.a_form.term_count() << " terms up to fiber degree " << fd.a_form.max_y_degree();
        rep.info("fedosov.a_summary", os.str());
        for (const auto& [k, c] : fd.a_form.terms()) {
            std::ostringstream line;
            line << "dx=" << k.dx[0] << " dy=" << k.xi[0] << " y=[";
            for (size_t i = 0; i < k.y.size(); ++i) line << (i ? "," : "") << k.y[i];
            line << "] poly= " << c.str();
            rep.info("fedosov.a_coefficient", line.str());
        }
    }

    run_check(rep, "fedosov.anticommute", "delta nabla + nabla delta = 0", [&](CheckRecord& r) {
        Rng rng(sc.seed + 30);
        probe_loop(r, sc, sc.probes, [&](int) {
            SmElement a = rand_sm(rng, d, ny, sh);
            return delta(nabla(conn, a)) + nabla(conn, delta(a));
        });
    });

    run_check(rep, "fedosov.curvature", "nabla(nabla(a)) equals the curvature action",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 31);
                  PolyVector big_r = curvature(conn, ny);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      SmElement a = rand_sm(rng, d, ny, sh);
                      return nabla(conn, nabla(conn, a)) - apply_vector_field(big_r, a);
                  });
              });

    run_check(rep, "fedosov.a_normalized", "delta_inv(A) = 0", [&](CheckRecord& r) {
        record_residual(r, delta_inv(fd.a_form));
    });

    run_check(rep, "fedosov.dsq", "D(D(a)) = 0 through fiber degree ny - 2, all families",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 32);
                  r.pass = true;
                  for (int i = 0; i < sc.probes && r.pass; ++i) {
                      bool ok =
                          fedosov_D(fd, fedosov_D(fd, rand_sm(rng, d, ny, sh))).truncated(ny - 2).is_zero() &&
                          fedosov_D(fd, fedosov_D(fd, rand_polyvector(rng, d, ny, 2, sh)))
                              .truncated(ny - 2)
                              .is_zero() &&
                          // first-order operator probes; an order-w slot eats
                          // w fiber degrees of A, shrinking the valid range
                          fedosov_D(fd, fedosov_D(fd, rand_polydiffop(rng, d, ny, 2, 1, sh)))
                              .truncated(ny - 2)
                              .is_zero() &&
                          fedosov_D(fd, fedosov_D(fd, rand_chain(rng, d, ny, 3, sh)))
                              .truncated(ny - 2)
                              .is_zero() &&
                          fedosov_D(fd, fedosov_D(fd, rand_eform(rng, d, ny, 2, sh)))
                              .truncated(ny - 2)
                              .is_zero();
                      if (!ok) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "fedosov.deRham_anticommute", "D delta^f + delta^f D = 0 on fiberwise forms",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 33);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      EForm w = rand_eform(rng, d, ny, 2, sh);
                      EForm res = fedosov_D(fd, fiber_deRham(w)) + fiber_deRham(fedosov_D(fd, w));
                      return res.truncated(ny - 2);
                  });
              });

    run_check(rep, "fedosov.tau_section", "sigma(tau(a)) = a for lifted base functions",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 34);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      XPoly a = rand_xpoly(rng, d, 3, 3);
                      SmElement res = sigma(tau_lift(a, fd));
                      SmElement expect(d, ny);
                      expect.add(SmKey{{}, {}}, a);
                      return res - expect;
                  });
              });

    run_check(rep, "fedosov.tau_closed", "D(tau(a)) = 0 through fiber degree ny - 2",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 35);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      XPoly a = rand_xpoly(rng, d, 2, 2);
                      return fedosov_D(fd, tau_lift(a, fd)).truncated(ny - 2);
                  });
              });

    run_check(rep, "fedosov.tau_multiplicative", "tau(a b) = tau(a) tau(b) through the valid degree",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 36);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      XPoly a = rand_xpoly(rng, d, 2, 2);
                      XPoly b = rand_xpoly(rng, d, 2, 2);
                      SmElement res = graded_mul(tau_lift(a, fd), tau_lift(b, fd)) - tau_lift(a * b, fd);
                      return res.truncated(ny - 2);
                  });
              });

    run_check(rep, "fedosov.tau_deRham", "delta^f tau(a) = tau(d_C a) on base forms",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 37);
                  probe_loop(r, sc, sc.probes, [&](int) {
                      EForm w(d, ny);
                      add_raw(w, {}, {}, {rng.range(1, d)}, rand_xpoly(rng, d, 2, 1));
                      add_raw(w, {}, {}, {}, rand_xpoly(rng, d, 2, 1));
                      EForm res = fiber_deRham(tau_lift(w, fd)) - tau_lift(base_deRham(w), fd);
                      return res.truncated(ny - 2);
                  });
              });

    run_check(rep, "fedosov.tau_lie",
              "tau intertwines base and fiberwise Lie derivatives along lifted polyvectors",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 38);
                  ProbeShape flat_sh{.terms = 2, .max_x_deg = 2, .max_y_deg = 0, .max_dx = 0};
                  probe_loop(r, sc, std::max(sc.probes / 2, 5), [&](int) {
                      PolyVector g = rand_polyvector_homog(rng, d, ny, rng.range(-1, 1), flat_sh);
                      PolyVector gflat(d, ny);
                      for (const auto& [k, c] : g.terms())
                          if (k.ext() == 0 && k.ydeg() == 0) gflat.add(k, c);
                      if (gflat.is_zero()) return EForm(d, ny);
                      EForm w(d, ny);
                      add_raw(w, {}, {}, {rng.range(1, d)}, rand_xpoly(rng, d, 2, 1));
                      add_raw(w, {}, {}, {}, rand_xpoly(rng, d, 2, 1));
                      EForm lhs = tau_lift(base_lie_derivative(gflat, w), fd);
                      EForm rhs = lie_derivative(tau_lift(nu_inverse(gflat), fd), tau_lift(w, fd));
                      return (lhs - rhs).truncated(ny - 2);
                  });
              });

    run_check(rep, "fedosov.rho_closed", "D(rho(a)) = 0 for embedded base chains",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 39);
                  probe_loop(r, sc, std::max(sc.probes / 4, 3), [&](int) {
                      int slots = rng.range(1, 3);
                      BaseChain a(d, slots, rand_xpoly(rng, d * slots, 2, 3));
                      return fedosov_D(fd, varrho(a, fd)).truncated(ny - 2);
                  });
              });

    run_check(rep, "fedosov.rho_diagonal", "rho(a) restricts to the diagonal of a at y = 0",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 40);
                  probe_loop(r, sc, std::max(sc.probes / 4, 3), [&](int) {
                      int slots = rng.range(1, 3);
                      BaseChain a(d, slots, rand_xpoly(rng, d * slots, 2, 3));
                      ChainElement lift = varrho(a, fd);
                      XPoly diag(d);
                      for (const auto& [k, c] : lift.terms())
                          if (k.ydeg() == 0 && k.ext() == 0) diag += c;
                      XPoly res = diag - diagonal_restriction(a);
                      SmElement out(d, ny);
                      out.add(SmKey{{}, {}}, res);
                      return out;
                  });
              });

    run_check(rep, "fedosov.nu_evaluation",
              "nu recovers base vector fields, bivectors and the multiplication",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 41);
                  r.pass = true;
                  PolyVector v(d, ny);
                  add_raw(v, {}, {}, {1}, XPoly::constant(d, Rational(1)));
                  PolyDiffOp mu = mu_operator(d, ny);
                  for (int i = 0; i < std::max(sc.probes / 2, 5) && r.pass; ++i) {
                      XPoly a = rand_xpoly(rng, d, 3, 3);
                      XPoly b = rand_xpoly(rng, d, 2, 2);
                      std::vector<XPoly> one{a};
                      std::vector<XPoly> two{a, b};
                      bool ok = nu_apply(v, one, fd) == a.dx(1) && nu_apply(mu, two, fd) == a * b;
                      if (d >= 2) {
                          PolyVector biv(d, ny);
                          add_raw(biv, {}, {}, {1, 2}, XPoly::constant(d, Rational(1)));
                          ok = ok && nu_apply(biv, two, fd) == a.dx(1) * b.dx(2) - a.dx(2) * b.dx(1);
                      }
                      if (!ok) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "fedosov.conjugator", "(d - delta) P = P D through fiber degree ny - 2",
              [&](CheckRecord& r) {
                  PolyDiffOp p = conjugator_P(fd);
                  record_residual(r, conjugator_residual(fd, p).truncated(ny - 2));
                  if (conn.is_flat() && !(p == identity_operator(d, ny))) r.pass = false;
              });

    {
        // D^2 residual table: the largest fiber degree with a nonzero
        // residual per family, -1 when the square vanishes identically
        Rng rng(sc.seed + 42);
        auto residual_degree = [&](auto maker) {
            int deg = -1;
            for (int i = 0; i < 5; ++i) {
                auto res = fedosov_D(fd, fedosov_D(fd, maker()));
                if (!res.is_zero()) deg = std::max(deg, res.max_y_degree());
            }
            return deg;
        };
        std::ostringstream os;
        os << "functions=" << residual_degree([&] { return rand_sm(rng, d, ny, sh); })
           << " polyvectors=" << residual_degree([&] { return rand_polyvector(rng, d, ny, 2, sh); })
           << " operators=" << residual_degree([&] { return rand_polydiffop(rng, d, ny, 2, 2, sh); })
           << " chains=" << residual_degree([&] { return rand_chain(rng, d, ny, 3, sh); })
           << " forms=" << residual_degree([&] { return rand_eform(rng, d, ny, 2, sh); })
           << " (valid through " << ny - 2 << ")";
        rep.info("fedosov.dsq_residual_degrees", os.str());
    }
    return rep;
}

inline Report run_linfty_suite(const Scenario& sc) {
    using suites_detail::run_check;
    Report rep;
    int d = sc.d;
    int wide = std::max(sc.ny, 12);
    ProbeShape sh{.terms = 2, .max_x_deg = 1, .max_y_deg = 2, .max_dx = 1};

    run_check(rep, "linfty.dgla_relations",
              "differential, Leibniz and Jacobi rows vanish for both DGLA instances",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 50);
                  AlgebraTable<PolyDiffOp> qd;
                  qd.q1 = [](const PolyDiffOp& a) { return cochain_differential(a); };
                  qd.q2 = [](const PolyDiffOp& a, const PolyDiffOp& b) {
                      return gerstenhaber_bracket(a, b);
                  };
                  AlgebraTable<PolyVector> qt;
                  qt.q1 = [](const PolyVector& a) { return Rational(0) * a; };
                  qt.q2 = [](const PolyVector& a, const PolyVector& b) { return schouten_bracket(a, b); };
                  r.pass = true;
                  for (int i = 0; i < std::max(sc.probes / 3, 4) && r.pass; ++i) {
                      auto probe_d = [&] {
                          PolyDiffOp p = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                          return Probe<PolyDiffOp>{p, p.homogeneous_degree()};
                      };
                      auto p1 = probe_d(), p2 = probe_d(), p3 = probe_d();
                      bool ok = algebra_residual_arity1(qd, p1).is_zero() &&
                                algebra_residual_arity2(qd, p1, p2).is_zero() &&
                                algebra_residual_arity3(qd, p1, p2, p3).is_zero();
                      PolyVector g1 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 1), sh);
                      PolyVector g2 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 1), sh);
                      PolyVector g3 = rand_polyvector_homog(rng, d, wide, rng.range(-1, 1), sh);
                      if (!g1.is_zero() && !g2.is_zero() && !g3.is_zero()) {
                          Probe<PolyVector> t1{g1, g1.homogeneous_degree()};
                          Probe<PolyVector> t2{g2, g2.homogeneous_degree()};
                          Probe<PolyVector> t3{g3, g3.homogeneous_degree()};
                          ok = ok && algebra_residual_arity1(qt, t1).is_zero() &&
                               algebra_residual_arity2(qt, t1, t2).is_zero() &&
                               algebra_residual_arity3(qt, t1, t2, t3).is_zero();
                      }
                      if (!ok) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "linfty.mutations_flagged",
              "seeded corruptions of the bracket, the action and the morphism are detected",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 51);
                  int caught = 0;

                  // corrupted bracket: polluted by an unsigned composition
                  {
                      AlgebraTable<PolyDiffOp> bad;
                      bad.q1 = [](const PolyDiffOp& a) { return cochain_differential(a); };
                      bad.q2 = [](const PolyDiffOp& a, const PolyDiffOp& b) {
                          PolyDiffOp r2 = gerstenhaber_bracket(a, b);
                          for (const auto& [k, c] : a.terms()) {
                              if (k.slots.empty()) continue;
                              PolyDiffOp term(a.dim(), a.max_y());
                              term.add(k, c);
                              r2 += insert_compose(term, 0, b);
                          }
                          return r2;
                      };
                      for (int i = 0; i < 8; ++i) {
                          Probe<PolyDiffOp> p1{rand_polydiffop_homog(rng, d, wide, 1, 2, sh), 1};
                          Probe<PolyDiffOp> p2{rand_polydiffop_homog(rng, d, wide, 1, 2, sh), 1};
                          Probe<PolyDiffOp> p3{rand_polydiffop_homog(rng, d, wide, 1, 2, sh), 1};
                          if (!algebra_residual_arity3(bad, p1, p2, p3).is_zero()) {
                              ++caught;
                              break;
                          }
                      }
                  }

                  // corrupted module action
                  {
                      auto L = dpoly_dgla(d, wide);
                      ModuleTable<PolyDiffOp, ChainElement> bad = chain_module(d, wide);
                      bad.maps[1] = [](std::span<const PolyDiffOp> g, const ChainElement& v) {
                          return Rational(-1) * chain_action(g[0], v);
                      };
                      auto chi = module_to_end_morphism(bad);
                      auto Lend = end_dgla<ChainElement>(
                          [](const ChainElement& v) { return chain_differential(v); });
                      ChainElement vz(d, wide);
                      for (int i = 0; i < 8; ++i) {
                          std::vector<Probe<PolyDiffOp>> probes{
                              {rand_polydiffop_homog(rng, d, wide, 1, 2, sh), 1},
                              {rand_polydiffop_homog(rng, d, wide, 1, 2, sh), 1}};
                          ChainElement v = rand_chain(rng, d, wide, 3, sh);
                          EndOp<ChainElement> res = morphism_residual(
                              chi, L, Lend, std::span<const Probe<PolyDiffOp>>(probes.data(), 2));
                          if (!res(v, vz).is_zero()) {
                              ++caught;
                              break;
                          }
                      }
                  }

                  // corrupted two-term morphism
                  {
                      PolyDiffOp seed_op(1, wide);
                      add_raw(seed_op, {}, {1}, {{1, 1}}, XPoly::constant(1, Rational(1)));
                      MorphismTable<Line, PolyDiffOp> bad = line_two_term_morphism(seed_op);
                      auto f2 = bad.maps[2];
                      bad.maps[2] = [f2](std::span<const Line> g) { return Rational(-1) * f2(g); };
                      std::vector<Probe<Line>> lp{{Line{1}, 1}, {Line{rat(1, 2)}, 1}, {Line{2}, 1}};
                      auto Lline = line_dgla();
                      auto D1 = dpoly_dgla(1, wide);
                      for (int n = 2; n <= 3; ++n)
                          if (!morphism_residual(bad, Lline, D1,
                                                 std::span<const Probe<Line>>(lp.data(), (size_t)n))
                                   .is_zero()) {
                              ++caught;
                              break;
                          }
                  }

                  r.pass = (caught == 3);
                  r.residual_terms = 3 - caught;
              });

    run_check(rep, "linfty.pushforward", "the pushforward of a Maurer-Cartan element stays Maurer-Cartan",
              [&](CheckRecord& r) {
                  PolyDiffOp seed_op(1, wide);
                  add_raw(seed_op, {}, {1}, {{1, 1}}, XPoly::constant(1, Rational(1)));
                  MorphismTable<Line, PolyDiffOp> F = line_two_term_morphism(seed_op);
                  auto D1 = hbar_dgla(dpoly_dgla(1, wide), 3);
                  HbarSeries<Line> pi(3, Line{0});
                  pi[1] = Line{1};
                  HbarSeries<PolyDiffOp> s = mc_pushforward(F, pi, PolyDiffOp(1, wide));
                  record_residual(r, mc_residual(D1, s));
              });

    run_check(rep, "linfty.functoriality",
              "twisting commutes with composition against a strict homomorphism", [&](CheckRecord& r) {
                  PolyDiffOp seed_op(1, wide);
                  add_raw(seed_op, {}, {1}, {{1, 1}}, XPoly::constant(1, Rational(1)));
                  MorphismTable<Line, PolyDiffOp> F = line_two_term_morphism(seed_op);
                  MorphismTable<PolyDiffOp, PolyDiffOp> G = rescale_morphism(Rational(2));
                  MorphismTable<Line, PolyDiffOp> GF = compose_morphism(G, F);
                  HbarSeries<Line> pi(3, Line{0});
                  pi[1] = Line{1};
                  HbarSeries<PolyDiffOp> S = mc_pushforward(F, pi, PolyDiffOp(1, wide));
                  auto lhs = twist_morphism(GF, pi, PolyDiffOp(1, wide));
                  auto rhs = compose_morphism(twist_morphism(G, S, PolyDiffOp(1, wide)),
                                              twist_morphism(F, pi, PolyDiffOp(1, wide)));
                  std::vector<HbarSeries<Line>> args;
                  for (int i = 0; i < 3; ++i) {
                      HbarSeries<Line> a(3, Line{0});
                      a[1] = Line{rat(i + 1, 2)};
                      a[2] = Line{rat(1, i + 1)};
                      args.push_back(a);
                  }
                  r.pass = true;
                  for (int n = 1; n <= 3 && r.pass; ++n) {
                      auto span = std::span<const HbarSeries<Line>>(args.data(), (size_t)n);
                      if (!(lhs.apply(n, span) == rhs.apply(n, span))) r.pass = false;
                  }
              });

    run_check(rep, "linfty.module_relations",
              "chain and form module structures satisfy the quadratic relations", [&](CheckRecord& r) {
                  Rng rng(sc.seed + 52);
                  auto L = dpoly_dgla(d, wide);
                  ModuleTable<PolyDiffOp, ChainElement> phi = chain_module(d, wide);
                  auto chi = module_to_end_morphism(phi);
                  auto Lend = end_dgla<ChainElement>(
                      [](const ChainElement& v) { return chain_differential(v); });
                  ChainElement vz(d, wide);
                  r.pass = true;
                  for (int i = 0; i < std::max(sc.probes / 3, 4) && r.pass; ++i) {
                      std::vector<Probe<PolyDiffOp>> probes;
                      for (int n = 0; n < 3; ++n) {
                          PolyDiffOp g = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                          probes.push_back({g, g.homogeneous_degree()});
                      }
                      ChainElement v = rand_chain(rng, d, wide, 3, sh);
                      for (int n = 1; n <= 3 && r.pass; ++n) {
                          EndOp<ChainElement> res = morphism_residual(
                              chi, L, Lend, std::span<const Probe<PolyDiffOp>>(probes.data(), (size_t)n));
                          if (!res(v, vz).is_zero()) {
                              r.pass = false;
                              r.offending = "seed probe=" + std::to_string(i);
                          }
                      }
                  }
              });

    run_check(rep, "linfty.module_morphism",
              "the rescaling chain map intertwines the module structures", [&](CheckRecord& r) {
                  Rng rng(sc.seed + 53);
                  auto L = dpoly_dgla(d, wide);
                  Rational lambda(2);
                  ModuleTable<PolyDiffOp, ChainElement> phiM = chain_module(d, wide);
                  ModuleTable<PolyDiffOp, ChainElement> phiN = phiM;
                  phiN.maps[1] = [lambda](std::span<const PolyDiffOp> g, const ChainElement& v) {
                      return rescale_chain(chain_action(g[0], rescale_chain(v, Rational(1) / lambda)),
                                           lambda);
                  };
                  ModuleMorTable<PolyDiffOp, ChainElement, ChainElement> kappa;
                  kappa.cutoff = 2;
                  kappa.maps.resize(3);
                  kappa.maps[0] = [lambda](std::span<const PolyDiffOp>, const ChainElement& v) {
                      return rescale_chain(v, lambda);
                  };
                  ChainElement nz(d, wide);
                  r.pass = true;
                  for (int i = 0; i < std::max(sc.probes / 3, 4) && r.pass; ++i) {
                      std::vector<Probe<PolyDiffOp>> probes;
                      for (int n = 0; n < 2; ++n) {
                          PolyDiffOp g = rand_polydiffop_homog(rng, d, wide, rng.range(0, 2), 2, sh);
                          probes.push_back({g, g.homogeneous_degree()});
                      }
                      ChainElement v = rand_chain(rng, d, wide, 3, sh);
                      for (int n = 0; n <= 2 && r.pass; ++n) {
                          auto span = std::span<const Probe<PolyDiffOp>>(probes.data(), (size_t)n);
                          if (!module_mor_residual(kappa, phiM, phiN, L, span, v, nz).is_zero())
                              r.pass = false;
                      }
                  }
              });
    return rep;
}

inline Report run_moyal_suite(const Scenario& sc) {
    using suites_detail::probe_loop;
    using suites_detail::run_check;
    Report rep;
    int d = sc.d;
    int ny = std::max(sc.ny, 8);
    int nh = sc.nhbar;
    ConstPoisson th = sc.poisson();
    StarProduct star = moyal_product(th, nh, ny);
    ProbeShape sh{.terms = 2, .max_x_deg = 1, .max_y_deg = 2, .max_dx = 0};

    run_check(rep, "moyal.mc", "dPsi + (1/2)[Psi,Psi] = 0 for the star product deformation",
              [&](CheckRecord& r) { record_residual(r, star_mc_check(star)); });

    run_check(rep, "moyal.associativity", "(a*b)*c = a*(b*c) through the hbar order",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 60);
                  r.pass = true;
                  for (int i = 0; i < std::max(sc.probes / 3, 4) && r.pass; ++i) {
                      SmElement a = rand_sm(rng, d, ny, sh);
                      SmElement b = rand_sm(rng, d, ny, sh);
                      SmElement c = rand_sm(rng, d, ny, sh);
                      HbarSeries<SmElement> l(nh, SmElement(d, ny)), rr(nh, SmElement(d, ny));
                      HbarSeries<SmElement> ab = star_apply(star, a, b);
                      HbarSeries<SmElement> bc = star_apply(star, b, c);
                      for (int p = 0; p <= nh; ++p)
                          for (int q = 0; p + q <= nh; ++q) {
                              if (!ab[p].is_zero()) l[p + q] += star_apply(star, ab[p], c)[q];
                              if (!bc[p].is_zero()) rr[p + q] += star_apply(star, a, bc[p])[q];
                          }
                      if (!(l == rr)) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "moyal.twisted_chain_dsq", "R_Pi squares to zero on probe chains",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 61);
                  auto rpi = twisted_chain_differential(star);
                  r.pass = true;
                  for (int i = 0; i < std::max(sc.probes / 2, 5) && r.pass; ++i) {
                      HbarSeries<ChainElement> v(nh, ChainElement(d, ny));
                      v[0] = rand_chain(rng, d, ny, 3, sh);
                      if (!rpi(rpi(v)).is_zero()) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "moyal.first_order",
              "the hbar coefficient of R_Pi on two-slot chains is the theta-Poisson bracket",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 62);
                  auto rpi = twisted_chain_differential(star);
                  r.pass = true;
                  for (int i = 0; i < std::max(sc.probes / 2, 5) && r.pass && nh >= 1; ++i) {
                      SmElement a0 = rand_sm(rng, d, ny, sh);
                      SmElement a1 = rand_sm(rng, d, ny, sh);
                      ChainElement ch(d, ny);
                      for (const auto& [k0, c0] : a0.terms())
                          for (const auto& [k1, c1] : a1.terms())
                              ch.add(CKey{{}, {k0.y, k1.y}}, c0 * c1);
                      HbarSeries<ChainElement> v(nh, ChainElement(d, ny));
                      v[0] = ch;
                      SmElement poisson(d, ny);
                      for (int p = 1; p <= d; ++p)
                          for (int q = 1; q <= d; ++q) {
                              Rational t = th.theta(p, q);
                              if (t == 0) continue;
                              poisson += t * graded_mul(partial_y(a0, p), partial_y(a1, q));
                          }
                      if (!(rpi(v)[1] == sm_to_chain(poisson))) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });

    run_check(rep, "moyal.twisted_form_dsq", "L_alpha squares to zero on probe forms",
              [&](CheckRecord& r) {
                  Rng rng(sc.seed + 63);
                  HbarSeries<PolyVector> alpha(nh, PolyVector(d, ny));
                  if (nh >= 1) alpha[1] = th.bivector(ny);
                  auto la = twisted_form_differential(alpha, d, ny);
                  r.pass = true;
                  for (int i = 0; i < std::max(sc.probes / 2, 5) && r.pass; ++i) {
                      HbarSeries<EForm> w(nh, EForm(d, ny));
                      w[0] = rand_eform(rng, d, ny, 2, sh);
                      if (!la(la(w)).is_zero()) {
                          r.pass = false;
                          r.offending = "seed probe=" + std::to_string(i);
                      }
                  }
              });
    return rep;
}

inline Report run_suites(const Scenario& sc, const std::set<std::string>& which) {
    Report rep;
    auto want = [&](const std::string& s) { return which.empty() || which.count(s) > 0; };
    if (want("homotopy")) rep.append(run_homotopy_suite(sc));
    if (want("brackets")) rep.append(run_bracket_suite(sc));
    if (want("comparison")) rep.append(run_comparison_suite(sc));
    if (want("fedosov")) rep.append(run_fedosov_suite(sc));
    if (want("linfty")) rep.append(run_linfty_suite(sc));
    if (want("moyal")) rep.append(run_moyal_suite(sc));
    return rep;
}

}  // namespace fedra
