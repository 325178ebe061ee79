#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace fedra {

// Exact rational coefficients. cpp_rational keeps num/den in lowest terms
// with a positive denominator, so canonical form holds by construction.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rat(long long num, long long den = 1) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(Integer(num), Integer(den));
}

inline Rational factorial(int n) {
    Integer f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

inline Rational binomial(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    Integer num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= (n - i);
        den *= (i + 1);
    }
    return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += "/";
        s += denominator(r).str();
    }
    return s;
}

}  // namespace fedra
