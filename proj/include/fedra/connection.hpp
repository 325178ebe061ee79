#pragma once

#include <map>
#include <tuple>

#include "fedra/chains.hpp"
#include "fedra/eform.hpp"
#include "fedra/homotopy.hpp"
#include "fedra/polyvector.hpp"

namespace fedra {

// Torsion-free affine connection on the chart: Christoffel symbols
// Gamma^k_{ij}(x) with Gamma^k_{ij} = Gamma^k_{ji}, stored for i <= j.
class Connection {
  public:
    explicit Connection(int dim) : dim_(dim) {}

    int dim() const { return dim_; }

    void set(int k, int i, int j, const XPoly& p) {
        if (k < 1 || k > dim_ || i < 1 || i > dim_ || j < 1 || j > dim_)
            throw IndexError("Christoffel index out of range");
        if (i > j) std::swap(i, j);
        if (p.is_zero())
            entries_.erase({k, i, j});
        else
            entries_.insert_or_assign(std::tuple{k, i, j}, p);
    }

    XPoly gamma(int k, int i, int j) const {
        if (i > j) std::swap(i, j);
        auto it = entries_.find({k, i, j});
        return it == entries_.end() ? XPoly(dim_) : it->second;
    }

    bool is_flat() const { return entries_.empty(); }

    const std::map<std::tuple<int, int, int>, XPoly>& entries() const { return entries_; }

    // Gamma = -dx^i Gamma^k_{ij}(x) y^j d/dy^k as a one-form valued vector field.
    PolyVector gamma_element(int ny) const {
        PolyVector g(dim_, ny);
        for (int i = 1; i <= dim_; ++i)
            for (int j = 1; j <= dim_; ++j)
                for (int k = 1; k <= dim_; ++k) {
                    XPoly p = gamma(k, i, j);
                    if (p.is_zero()) continue;
                    g.add(TKey{{i}, {j}, {k}}, -p);
                }
        return g;
    }

  private:
    int dim_;
    std::map<std::tuple<int, int, int>, XPoly> entries_;
};

// dx^i d/dx^i on any family (coefficient-level De Rham part).
template <class K>
Series<K> de_rham_x(const Series<K>& a) {
    Series<K> r(a.dim(), a.max_y());
    for (const auto& [k, c] : a.terms())
        for (int i = 1; i <= a.dim(); ++i) {
            XPoly dc = c.dx(i);
            if (dc.is_zero()) continue;
            auto [s, dx] = wedge_front(i, k.dx);
            if (s == 0) continue;
            K nk = k;
            nk.dx = dx;
            if (s < 0) dc *= Rational(-1);
            r.add(nk, dc);
        }
    return r;
}

// Covariant derivative per family: nabla = dx^i d/dx^i + (Gamma action).
inline SmElement nabla(const Connection& conn, const SmElement& a) {
    SmElement r = de_rham_x(a);
    if (!conn.is_flat()) r += apply_vector_field(conn.gamma_element(a.max_y()), a);
    return r;
}

inline PolyVector nabla(const Connection& conn, const PolyVector& a) {
    PolyVector r = de_rham_x(a);
    if (!conn.is_flat()) r += schouten_bracket(conn.gamma_element(a.max_y()), a);
    return r;
}

inline PolyDiffOp nabla(const Connection& conn, const PolyDiffOp& a) {
    PolyDiffOp r = de_rham_x(a);
    if (!conn.is_flat())
        r += gerstenhaber_bracket(vector_to_operator(conn.gamma_element(a.max_y())), a);
    return r;
}

inline EForm nabla(const Connection& conn, const EForm& a) {
    EForm r = de_rham_x(a);
    if (!conn.is_flat()) r += lie_derivative(conn.gamma_element(a.max_y()), a);
    return r;
}

inline ChainElement nabla(const Connection& conn, const ChainElement& a) {
    ChainElement r = de_rham_x(a);
    if (!conn.is_flat()) r += chain_action(vector_to_operator(conn.gamma_element(a.max_y())), a);
    return r;
}

// Curvature element R = -1/2 dx^i dx^j (R_ij)^k_l y^l d/dy^k with
//   (R_ij)^k_l = d_i Gamma^k_{jl} - d_j Gamma^k_{il}
//              + Gamma^k_{im} Gamma^m_{jl} - Gamma^k_{jm} Gamma^m_{il},
// cross-checked against nabla^2 in the test suite.
inline PolyVector curvature(const Connection& conn, int ny) {
    int d = conn.dim();
    PolyVector r(d, ny);
    for (int i = 1; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j)
            for (int k = 1; k <= d; ++k)
                for (int l = 1; l <= d; ++l) {
                    XPoly comp = conn.gamma(k, j, l).dx(i) - conn.gamma(k, i, l).dx(j);
                    for (int m = 1; m <= d; ++m) {
                        comp += conn.gamma(k, i, m) * conn.gamma(m, j, l);
                        comp -= conn.gamma(k, j, m) * conn.gamma(m, i, l);
                    }
                    if (comp.is_zero()) continue;
                    // antisymmetry doubles the ordered (i<j) contribution
                    r.add(TKey{{i, j}, {l}, {k}}, -comp);
                }
    return r;
}

}  // namespace fedra
