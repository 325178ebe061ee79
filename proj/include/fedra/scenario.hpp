#pragma once

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fedra/connection.hpp"
#include "fedra/moyal.hpp"

namespace fedra {

// Batch scenario: a key/value text file with one entry per line.
//
//   # comment
//   d = 2
//   ny = 6
//   nhbar = 4
//   seed = 42
//   probes = 40
//   suites = check,fedosov
//   gamma 1 2 2 = x1          (Christoffel Gamma^1_{22} = x^1)
//   theta 1 2 = 1             (upper-triangular Poisson entry)
//
// Polynomial values use the same grammar as every fixture:
// `3/2*x1^2*x2 - x3`. Keys are whitespace-insensitive; unknown keys are
// rejected with position information.
struct Scenario {
    int d = 2;
    int ny = 6;
    int nhbar = 4;
    uint64_t seed = 1;
    int probes = 25;
    std::set<std::string> suites;  // empty = subcommand default
    std::vector<std::tuple<int, int, int, std::string>> gamma;  // k, i, j, poly text
    std::vector<std::tuple<int, int, Rational>> theta;

    Connection connection() const {
        Connection c(d);
        for (const auto& [k, i, j, text] : gamma) c.set(k, i, j, XPoly::parse(text, d));
        return c;
    }

    ConstPoisson poisson() const {
        ConstPoisson th(d);
        for (const auto& [i, j, v] : theta) th.set(i, j, v);
        return th;
    }

    void validate() const {
        if (d < 1) throw Error("scenario: d must be >= 1");
        if (ny < 2) throw Error("scenario: ny must be >= 2");
        if (nhbar < 0) throw Error("scenario: nhbar must be >= 0");
        if (probes < 1) throw Error("scenario: probes must be >= 1");
        connection();
        poisson();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline long long parse_int(const std::string& s, int line, int col) {
    try {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError("expected integer, got '" + s + "'", line, col);
    }
}

inline Rational parse_rational(const std::string& s, int line, int col) {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(parse_int(s, line, col)));
    long long num = parse_int(s.substr(0, slash), line, col);
    long long den = parse_int(s.substr(slash + 1), line, col + (int)slash + 1);
    if (den == 0) throw ParseError("zero denominator", line, col);
    return rat(num, den);
}

}  // namespace detail

inline Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno, 1);
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        int vcol = (int)eq + 2;
        if (value.empty()) throw ParseError("missing value", lineno, vcol);

        std::istringstream ks(key);
        std::string head;
        ks >> head;
        if (head == "d") {
            sc.d = (int)detail::parse_int(value, lineno, vcol);
        } else if (head == "ny") {
            sc.ny = (int)detail::parse_int(value, lineno, vcol);
        } else if (head == "nhbar") {
            sc.nhbar = (int)detail::parse_int(value, lineno, vcol);
        } else if (head == "seed") {
            sc.seed = (uint64_t)detail::parse_int(value, lineno, vcol);
        } else if (head == "probes") {
            sc.probes = (int)detail::parse_int(value, lineno, vcol);
        } else if (head == "suites") {
            std::istringstream vs(value);
            std::string item;
            while (std::getline(vs, item, ',')) {
                item = detail::trim(item);
                if (!item.empty()) sc.suites.insert(item);
            }
        } else if (head == "gamma") {
            int k, i, j;
            if (!(ks >> k >> i >> j)) throw ParseError("gamma needs three indices", lineno, 1);
            XPoly::parse(value, sc.d, lineno);  // surface bad polynomials here
            sc.gamma.emplace_back(k, i, j, value);
        } else if (head == "theta") {
            int i, j;
            if (!(ks >> i >> j)) throw ParseError("theta needs two indices", lineno, 1);
            sc.theta.emplace_back(i, j, detail::parse_rational(value, lineno, vcol));
        } else {
            throw ParseError("unknown key '" + head + "'", lineno, 1);
        }
    }
    sc.validate();
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    return parse_scenario(in);
}

inline std::string scenario_summary(const Scenario& sc) {
    std::ostringstream os;
    os << "d=" << sc.d << " ny=" << sc.ny << " nhbar=" << sc.nhbar << " seed=" << sc.seed
       << " probes=" << sc.probes << " gamma_entries=" << sc.gamma.size()
       << " theta_entries=" << sc.theta.size();
    return os.str();
}

}  // namespace fedra
