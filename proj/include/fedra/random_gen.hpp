#pragma once

#include <cstdint>
#include <random>

#include "fedra/connection.hpp"

namespace fedra {

// Deterministic generator for probe elements. Draws go through raw engine
// words only (no std distributions), so a seed pins the byte-exact stream on
// every platform.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t raw() { return eng_(); }

    // inclusive bounds
    int range(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + (int)(raw() % (uint64_t)(hi - lo + 1));
    }

    Rational coeff() {
        int num = range(-3, 3);
        if (num == 0) num = 1;
        int den = range(1, 2);
        return rat(num, den);
    }

  private:
    std::mt19937_64 eng_;
};

inline XPoly rand_xpoly(Rng& rng, int d, int max_deg, int terms) {
    XPoly p(d);
    for (int t = 0; t < terms; ++t) {
        Monomial m(d, 0);
        int deg = rng.range(0, max_deg);
        for (int e = 0; e < deg; ++e) m[rng.range(0, d - 1)] += 1;
        p.add(m, rng.coeff());
    }
    return p;
}

inline YMulti rand_ymulti(Rng& rng, int d, int deg) {
    YMulti m;
    for (int e = 0; e < deg; ++e) m.push_back(rng.range(1, d));
    std::sort(m.begin(), m.end());
    return m;
}

inline IndexSet rand_indexset(Rng& rng, int d, int size) {
    // distinct sorted indices; size clamped to d
    size = std::min(size, d);
    std::vector<int> all;
    for (int i = 1; i <= d; ++i) all.push_back(i);
    for (int i = (int)all.size() - 1; i > 0; --i) std::swap(all[i], all[rng.range(0, i)]);
    IndexSet s(all.begin(), all.begin() + size);
    std::sort(s.begin(), s.end());
    return s;
}

struct ProbeShape {
    int terms = 3;
    int max_x_deg = 2;
    int max_y_deg = 3;
    int max_dx = 2;
};

inline SmElement rand_sm(Rng& rng, int d, int ny, const ProbeShape& sh = {}) {
    SmElement a(d, ny);
    for (int t = 0; t < sh.terms; ++t)
        a.add(SmKey{rand_indexset(rng, d, rng.range(0, sh.max_dx)),
                    rand_ymulti(rng, d, rng.range(0, sh.max_y_deg))},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    return a;
}

inline PolyVector rand_polyvector(Rng& rng, int d, int ny, int max_xi, const ProbeShape& sh = {}) {
    PolyVector a(d, ny);
    for (int t = 0; t < sh.terms; ++t)
        a.add(TKey{rand_indexset(rng, d, rng.range(0, sh.max_dx)),
                   rand_ymulti(rng, d, rng.range(0, sh.max_y_deg)),
                   rand_indexset(rng, d, rng.range(0, max_xi))},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    return a;
}

inline PolyDiffOp rand_polydiffop(Rng& rng, int d, int ny, int max_rank, int max_order,
                                  const ProbeShape& sh = {}) {
    PolyDiffOp a(d, ny);
    for (int t = 0; t < sh.terms; ++t) {
        int rank = rng.range(1, max_rank);
        std::vector<YMulti> slots(rank);
        for (auto& s : slots) s = rand_ymulti(rng, d, rng.range(0, max_order));
        a.add(DKey{rand_indexset(rng, d, rng.range(0, sh.max_dx)),
                   rand_ymulti(rng, d, rng.range(0, sh.max_y_deg)), std::move(slots)},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    }
    return a;
}

inline ChainElement rand_chain(Rng& rng, int d, int ny, int max_slots, const ProbeShape& sh = {}) {
    ChainElement a(d, ny);
    for (int t = 0; t < sh.terms; ++t) {
        int nslots = rng.range(1, max_slots);
        std::vector<YMulti> slots(nslots);
        for (auto& s : slots) s = rand_ymulti(rng, d, rng.range(0, sh.max_y_deg));
        a.add(CKey{rand_indexset(rng, d, rng.range(0, sh.max_dx)), std::move(slots)},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    }
    return a;
}

inline EForm rand_eform(Rng& rng, int d, int ny, int max_c, const ProbeShape& sh = {}) {
    EForm a(d, ny);
    for (int t = 0; t < sh.terms; ++t)
        a.add(EKey{rand_indexset(rng, d, rng.range(0, sh.max_dx)),
                   rand_ymulti(rng, d, rng.range(0, sh.max_y_deg)),
                   rand_indexset(rng, d, rng.range(0, max_c))},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    return a;
}

// Homogeneous-degree probes for the L-infinity relation suites.

inline PolyDiffOp rand_polydiffop_homog(Rng& rng, int d, int ny, int total_deg, int max_order,
                                        const ProbeShape& sh = {}) {
    PolyDiffOp a(d, ny);
    for (int t = 0; t < sh.terms; ++t) {
        // rank - 1 + |dx| = total_deg, rank >= 1, 0 <= |dx| <= d
        int min_e = std::max(0, total_deg - 3);
        int max_e = std::min(d, total_deg + 1);
        if (min_e > max_e) throw Error("rand_polydiffop_homog: unreachable degree");
        int e = rng.range(min_e, max_e);
        int rank = total_deg - e + 1;
        if (rank < 1) continue;
        std::vector<YMulti> slots(rank);
        for (auto& s : slots) s = rand_ymulti(rng, d, rng.range(0, max_order));
        a.add(DKey{rand_indexset(rng, d, e), rand_ymulti(rng, d, rng.range(0, sh.max_y_deg)),
                   std::move(slots)},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    }
    if (a.is_zero()) {
        std::vector<YMulti> slots((size_t)std::max(1, total_deg + 1));
        a.add(DKey{{}, {}, std::move(slots)}, XPoly::constant(d, Rational(1)));
    }
    return a;
}

inline PolyVector rand_polyvector_homog(Rng& rng, int d, int ny, int total_deg,
                                        const ProbeShape& sh = {}) {
    PolyVector a(d, ny);
    for (int t = 0; t < sh.terms; ++t) {
        // |xi| - 1 + |dx| = total_deg
        int min_e = std::max(0, total_deg + 1 - d);
        int max_e = std::min(d, total_deg + 1);
        if (min_e > max_e) throw Error("rand_polyvector_homog: unreachable degree");
        int e = rng.range(min_e, max_e);
        int nxi = total_deg - e + 1;
        if (nxi < 0 || nxi > d) continue;
        a.add(TKey{rand_indexset(rng, d, e), rand_ymulti(rng, d, rng.range(0, sh.max_y_deg)),
                   rand_indexset(rng, d, nxi)},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    }
    return a;
}

inline ChainElement rand_chain_homog(Rng& rng, int d, int ny, int total_deg, int max_slots,
                                     const ProbeShape& sh = {}) {
    ChainElement a(d, ny);
    for (int t = 0; t < sh.terms; ++t) {
        // |dx| - (slots - 1) = total_deg
        int min_e = std::max(0, total_deg);
        int max_e = std::min(d, total_deg + max_slots - 1);
        if (min_e > max_e) throw Error("rand_chain_homog: unreachable degree");
        int e = rng.range(min_e, max_e);
        int nslots = e - total_deg + 1;
        if (nslots < 1) continue;
        std::vector<YMulti> slots(nslots);
        for (auto& s : slots) s = rand_ymulti(rng, d, rng.range(0, sh.max_y_deg));
        a.add(CKey{rand_indexset(rng, d, e), std::move(slots)}, rand_xpoly(rng, d, sh.max_x_deg, 1));
    }
    return a;
}

inline EForm rand_eform_homog(Rng& rng, int d, int ny, int total_deg, const ProbeShape& sh = {}) {
    EForm a(d, ny);
    for (int t = 0; t < sh.terms; ++t) {
        // |dx| - |c| = total_deg
        int min_e = std::max(0, total_deg);
        int max_e = std::min(d, total_deg + d);
        if (min_e > max_e) throw Error("rand_eform_homog: unreachable degree");
        int e = rng.range(min_e, max_e);
        int nc = e - total_deg;
        if (nc < 0 || nc > d) continue;
        a.add(EKey{rand_indexset(rng, d, e), rand_ymulti(rng, d, rng.range(0, sh.max_y_deg)),
                   rand_indexset(rng, d, nc)},
              rand_xpoly(rng, d, sh.max_x_deg, 1));
    }
    return a;
}

// Random torsion-free connection with sparse low-degree Christoffel entries.
inline Connection rand_connection(Rng& rng, int d, int entries, int max_deg = 1) {
    Connection conn(d);
    for (int t = 0; t < entries; ++t) {
        int i = rng.range(1, d);
        int j = rng.range(1, d);
        int k = rng.range(1, d);
        conn.set(k, i, j, rand_xpoly(rng, d, max_deg, 1));
    }
    return conn;
}

}  // namespace fedra
