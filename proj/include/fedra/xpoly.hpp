#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fedra/errors.hpp"
#include "fedra/rational.hpp"

namespace fedra {

// Exponent vector of length d; Monomial[i] is the power of x^{i+1}.
using Monomial = std::vector<int>;

// Sparse multivariate polynomial in the base coordinates x^1..x^d over Q.
class XPoly {
  public:
    explicit XPoly(int dim) : dim_(dim) {}

    static XPoly constant(int dim, const Rational& c) {
        XPoly p(dim);
        p.add(Monomial(dim, 0), c);
        return p;
    }

    static XPoly variable(int dim, int i) {
        if (i < 1 || i > dim) throw IndexError("variable index out of range");
        Monomial m(dim, 0);
        m[i - 1] = 1;
        XPoly p(dim);
        p.add(m, Rational(1));
        return p;
    }

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    void add(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    XPoly& operator+=(const XPoly& o) {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    XPoly& operator-=(const XPoly& o) {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    XPoly& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }

    friend XPoly operator+(XPoly a, const XPoly& b) { return a += b; }
    friend XPoly operator-(XPoly a, const XPoly& b) { return a -= b; }
    friend XPoly operator*(XPoly a, const Rational& c) { return a *= c; }
    friend XPoly operator*(const Rational& c, XPoly a) { return a *= c; }
    friend XPoly operator-(XPoly a) { return a *= Rational(-1); }

    friend XPoly operator*(const XPoly& a, const XPoly& b) {
        a.check_dim(b);
        XPoly r(a.dim_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (int i = 0; i < a.dim_; ++i) m[i] += mb[i];
                r.add(m, ca * cb);
            }
        return r;
    }

    bool operator==(const XPoly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
    bool operator!=(const XPoly& o) const { return !(*this == o); }
    bool operator<(const XPoly& o) const { return terms_ < o.terms_; }

    // Formal partial derivative with respect to x^i (1-based).
    XPoly dx(int i) const {
        if (i < 1 || i > dim_) throw IndexError("dx index out of range");
        XPoly r(dim_);
        for (const auto& [m, c] : terms_) {
            if (m[i - 1] == 0) continue;
            Monomial n = m;
            n[i - 1] -= 1;
            r.add(n, c * m[i - 1]);
        }
        return r;
    }

    int total_degree() const {
        int deg = 0;
        for (const auto& [m, c] : terms_) {
            int s = 0;
            for (int e : m) s += e;
            deg = std::max(deg, s);
        }
        return deg;
    }

    // Substitute x^i -> args[i-1] for each coordinate; args share a dimension.
    XPoly substitute(const std::vector<XPoly>& args) const {
        if ((int)args.size() != dim_) throw IndexError("substitute: wrong argument count");
        int rd = args.empty() ? dim_ : args[0].dim();
        XPoly r(rd);
        for (const auto& [m, c] : terms_) {
            XPoly t = XPoly::constant(rd, c);
            for (int i = 0; i < dim_; ++i)
                for (int e = 0; e < m[i]; ++e) t = t * args[i];
            r += t;
        }
        return r;
    }

    // Text form per the fixture grammar: signed sum of `<rational>*x<i>^<e>*...`.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Rational a = c;
            if (first) {
                if (a < 0) {
                    out += "-";
                    a = -a;
                }
            } else {
                out += (a < 0) ? " - " : " + ";
                if (a < 0) a = -a;
            }
            first = false;
            bool has_var = std::any_of(m.begin(), m.end(), [](int e) { return e > 0; });
            if (!has_var || a != 1) out += to_string(a);
            bool star = (!has_var || a != 1);
            for (int i = 0; i < dim_; ++i) {
                if (m[i] == 0) continue;
                if (star) out += "*";
                out += "x" + std::to_string(i + 1);
                if (m[i] > 1) out += "^" + std::to_string(m[i]);
                star = true;
            }
        }
        return out;
    }

    static XPoly parse(std::string_view text, int dim, int line = 0);

  private:
    void check_dim(const XPoly& o) const {
        if (dim_ != o.dim_) throw FamilyMismatch("polynomial dimension mismatch");
    }

    int dim_;
    std::map<Monomial, Rational> terms_;
};

namespace detail {

class PolyLexer {
  public:
    PolyLexer(std::string_view s, int line) : s_(s), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool eof() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    char get() {
        skip_ws();
        return s_[pos_++];
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, (int)pos_ + 1); }

    long long integer() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit((unsigned char)s_[pos_])) fail("expected integer");
        long long v = 0;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

  private:
    std::string_view s_;
    size_t pos_ = 0;
    int line_;
};

}  // namespace detail

inline XPoly XPoly::parse(std::string_view text, int dim, int line) {
    detail::PolyLexer lx(text, line);
    XPoly out(dim);
    bool first = true;
    while (!lx.eof()) {
        Rational sign(1);
        char c = lx.peek();
        if (c == '+' || c == '-') {
            lx.get();
            if (c == '-') sign = -1;
        } else if (!first) {
            lx.fail("expected '+' or '-' between terms");
        }
        first = false;

        Rational coeff(1);
        bool saw_factor = false;
        if (std::isdigit((unsigned char)lx.peek())) {
            long long num = lx.integer();
            long long den = 1;
            if (lx.peek() == '/') {
                lx.get();
                den = lx.integer();
                if (den == 0) lx.fail("zero denominator");
            }
            coeff = rat(num, den);
            saw_factor = true;
        }
        Monomial m(dim, 0);
        while (true) {
            char p = lx.peek();
            if (p == '*') {
                lx.get();
                p = lx.peek();
            } else if (saw_factor && p != 'x') {
                break;
            }
            if (p != 'x') {
                if (saw_factor) break;
                lx.fail("expected term");
            }
            lx.get();
            long long i = lx.integer();
            if (i < 1 || i > dim) lx.fail("variable index out of range");
            long long e = 1;
            if (lx.peek() == '^') {
                lx.get();
                e = lx.integer();
            }
            m[i - 1] += (int)e;
            saw_factor = true;
        }
        out.add(m, sign * coeff);
    }
    return out;
}

}  // namespace fedra
