#pragma once

#include <functional>
#include <vector>

#include "fedra/errors.hpp"
#include "fedra/rational.hpp"

namespace fedra {

// Truncated formal power series in the deformation parameter, coefficients
// in any element family. Arithmetic truncates beyond the fixed order.
template <class E>
class HbarSeries {
  public:
    HbarSeries(int order, const E& zero) : coeffs_((size_t)order + 1, zero) {}

    int order() const { return (int)coeffs_.size() - 1; }
    E& operator[](int k) { return coeffs_.at((size_t)k); }
    const E& operator[](int k) const { return coeffs_.at((size_t)k); }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    // lowest hbar-power with a nonzero coefficient; order()+1 when zero
    int filtration_order() const {
        for (int k = 0; k <= order(); ++k)
            if (!coeffs_[(size_t)k].is_zero()) return k;
        return order() + 1;
    }

    HbarSeries& operator+=(const HbarSeries& o) {
        check(o);
        for (int k = 0; k <= order(); ++k) coeffs_[(size_t)k] += o.coeffs_[(size_t)k];
        return *this;
    }
    HbarSeries& operator-=(const HbarSeries& o) {
        check(o);
        for (int k = 0; k <= order(); ++k) coeffs_[(size_t)k] -= o.coeffs_[(size_t)k];
        return *this;
    }
    HbarSeries& operator*=(const Rational& r) {
        for (auto& c : coeffs_) c *= r;
        return *this;
    }

    friend HbarSeries operator+(HbarSeries a, const HbarSeries& b) { return a += b; }
    friend HbarSeries operator-(HbarSeries a, const HbarSeries& b) { return a -= b; }
    friend HbarSeries operator*(HbarSeries a, const Rational& r) { return a *= r; }
    friend HbarSeries operator*(const Rational& r, HbarSeries a) { return a *= r; }
    friend HbarSeries operator-(HbarSeries a) { return a *= Rational(-1); }

    bool operator==(const HbarSeries& o) const { return coeffs_ == o.coeffs_; }

  private:
    void check(const HbarSeries& o) const {
        if (order() != o.order()) throw FamilyMismatch("hbar order mismatch");
    }

    std::vector<E> coeffs_;
};

// Lifts a bilinear operation to series by convolution up to the truncation.
template <class A, class B, class R, class F>
HbarSeries<R> hbar_convolve(const F& op, const HbarSeries<A>& a, const HbarSeries<B>& b,
                            const R& zero) {
    HbarSeries<R> r(a.order(), zero);
    for (int i = 0; i <= a.order(); ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; i + j <= b.order(); ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += op(a[i], b[j]);
        }
    }
    return r;
}

// Lifts a linear operation componentwise.
template <class A, class R, class F>
HbarSeries<R> hbar_map(const F& op, const HbarSeries<A>& a, const R& zero) {
    HbarSeries<R> r(a.order(), zero);
    for (int i = 0; i <= a.order(); ++i)
        if (!a[i].is_zero()) r[i] = op(a[i]);
    return r;
}

}  // namespace fedra
