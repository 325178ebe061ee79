#pragma once

#include <istream>
#include <ostream>
#include <sstream>

#include "fedra/elements.hpp"

namespace fedra {

// Round-trippable text records for operators and chains, one term per line:
//
//   op d=2 ny=6
//   term dx=[1] y=[2,2] slots=[[1],[]] poly= 3/2*x1
//   end
//
//   chain d=2 ny=6
//   term dx=[] slots=[[1],[2,2]] poly= x1
//   end
//
// Index lists are comma-separated; polynomial text follows the shared
// grammar.

namespace detail {

inline std::string fmt_list(const std::vector<int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

inline std::string fmt_slots(const std::vector<YMulti>& slots) {
    std::string s = "[";
    for (size_t i = 0; i < slots.size(); ++i) {
        if (i) s += ",";
        s += fmt_list(slots[i]);
    }
    return s + "]";
}

class ListLexer {
  public:
    ListLexer(const std::string& s, int line) : s_(s), line_(line) {}

    std::vector<int> list() {
        expect('[');
        std::vector<int> out;
        if (peek() == ']') {
            ++pos_;
            return out;
        }
        while (true) {
            out.push_back(integer());
            char c = get();
            if (c == ']') return out;
            if (c != ',') fail("expected ',' or ']'");
        }
    }

    std::vector<YMulti> slots() {
        expect('[');
        std::vector<YMulti> out;
        if (peek() == ']') {
            ++pos_;
            return out;
        }
        while (true) {
            out.push_back(list());
            char c = get();
            if (c == ']') return out;
            if (c != ',') fail("expected ',' or ']' in slot list");
        }
    }

  private:
    char peek() { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
    void expect(char c) {
        if (get() != c) fail(std::string("expected '") + c + "'");
    }
    int integer() {
        bool neg = false;
        if (peek() == '-') {
            ++pos_;
            neg = true;
        }
        if (!std::isdigit((unsigned char)peek())) fail("expected index");
        int v = 0;
        while (std::isdigit((unsigned char)peek())) v = v * 10 + (get() - '0');
        return neg ? -v : v;
    }
    [[noreturn]] void fail(const std::string& m) { throw ParseError(m, line_, (int)pos_ + 1); }

    const std::string& s_;
    size_t pos_ = 0;
    int line_;
};

inline std::string field(const std::string& line, const std::string& name, int lineno) {
    std::string tag = name + "=";
    size_t p = line.find(tag);
    if (p == std::string::npos) throw ParseError("missing field '" + name + "'", lineno, 1);
    size_t start = p + tag.size();
    // a field runs to the next " <word>=" boundary or the line end
    size_t end = line.size();
    for (size_t q = start; q + 1 < line.size(); ++q) {
        if (line[q] == ' ') {
            size_t w = q + 1;
            while (w < line.size() && line[w] != ' ' && line[w] != '=') ++w;
            if (w < line.size() && line[w] == '=') {
                end = q;
                break;
            }
        }
    }
    return line.substr(start, end - start);
}

}  // namespace detail

inline void write_fixture(std::ostream& os, const PolyDiffOp& op) {
    os << "op d=" << op.dim() << " ny=" << op.max_y() << "\n";
    for (const auto& [k, c] : op.terms())
        os << "term dx=" << detail::fmt_list(k.dx) << " y=" << detail::fmt_list(k.y)
           << " slots=" << detail::fmt_slots(k.slots) << " poly= " << c.str() << "\n";
    os << "end\n";
}

inline void write_fixture(std::ostream& os, const ChainElement& a) {
    os << "chain d=" << a.dim() << " ny=" << a.max_y() << "\n";
    for (const auto& [k, c] : a.terms())
        os << "term dx=" << detail::fmt_list(k.dx) << " slots=" << detail::fmt_slots(k.slots)
           << " poly= " << c.str() << "\n";
    os << "end\n";
}

inline PolyDiffOp read_op_fixture(std::istream& is) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        break;
    }
    if (line.rfind("op ", 0) != 0) throw ParseError("expected 'op' header", lineno, 1);
    int d = (int)std::stol(detail::field(line, "d", lineno));
    int ny = (int)std::stol(detail::field(line, "ny", lineno));
    PolyDiffOp op(d, ny);
    while (std::getline(is, line)) {
        ++lineno;
        if (line == "end") return op;
        if (line.empty()) continue;
        if (line.rfind("term ", 0) != 0) throw ParseError("expected 'term' or 'end'", lineno, 1);
        std::string dxs = detail::field(line, "dx", lineno);
        std::string ys = detail::field(line, "y", lineno);
        std::string slots = detail::field(line, "slots", lineno);
        std::string poly = detail::field(line, "poly", lineno);
        detail::ListLexer lx1(dxs, lineno), lx2(ys, lineno), lx3(slots, lineno);
        std::vector<std::vector<int>> sl;
        for (auto& s : lx3.slots()) sl.push_back(s);
        add_raw(op, lx1.list(), lx2.list(), sl, XPoly::parse(poly, d, lineno));
    }
    throw ParseError("missing 'end'", lineno, 1);
}

inline ChainElement read_chain_fixture(std::istream& is) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        break;
    }
    if (line.rfind("chain ", 0) != 0) throw ParseError("expected 'chain' header", lineno, 1);
    int d = (int)std::stol(detail::field(line, "d", lineno));
    int ny = (int)std::stol(detail::field(line, "ny", lineno));
    ChainElement a(d, ny);
    while (std::getline(is, line)) {
        ++lineno;
        if (line == "end") return a;
        if (line.empty()) continue;
        if (line.rfind("term ", 0) != 0) throw ParseError("expected 'term' or 'end'", lineno, 1);
        std::string dxs = detail::field(line, "dx", lineno);
        std::string slots = detail::field(line, "slots", lineno);
        std::string poly = detail::field(line, "poly", lineno);
        detail::ListLexer lx1(dxs, lineno), lx3(slots, lineno);
        std::vector<std::vector<int>> sl;
        for (auto& s : lx3.slots()) sl.push_back(s);
        add_raw(a, lx1.list(), sl, XPoly::parse(poly, d, lineno));
    }
    throw ParseError("missing 'end'", lineno, 1);
}

}  // namespace fedra
