#pragma once

#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "fedra/elements.hpp"
#include "fedra/hbar.hpp"

#include <cstdio>

namespace fedra {

// One verification record. `identity` states the checked equation in plain
// text; residual fields summarize the offending element when a check fails.
struct CheckRecord {
    std::string name;
    std::string identity;
    bool pass = true;
    long long residual_terms = 0;
    int max_residual_ydeg = -1;
    double ms = 0.0;
    std::string offending;  // minimal input echo on failure
};

struct InfoRecord {
    std::string name;
    std::string text;
};

class Report {
  public:
    void add(CheckRecord rec) { checks_.push_back(std::move(rec)); }
    void info(std::string name, std::string text) {
        infos_.push_back({std::move(name), std::move(text)});
    }

    const std::vector<CheckRecord>& checks() const { return checks_; }
    const std::vector<InfoRecord>& infos() const { return infos_; }

    int passed() const {
        int n = 0;
        for (const auto& c : checks_) n += c.pass ? 1 : 0;
        return n;
    }
    int failed() const { return (int)checks_.size() - passed(); }
    bool all_pass() const { return failed() == 0; }

    void append(const Report& o) {
        for (const auto& c : o.checks_) checks_.push_back(c);
        for (const auto& i : o.infos_) infos_.push_back(i);
    }

    // Line-oriented rendering. Timing fields are excluded from the canonical
    // form so identical runs hash identically.
    std::string to_text(bool canonical) const {
        std::ostringstream os;
        for (const auto& i : infos_) os << "info " << i.name << " :: " << i.text << "\n";
        for (const auto& c : checks_) {
            os << "check " << c.name << " " << (c.pass ? "PASS" : "FAIL")
               << " residual_terms=" << c.residual_terms
               << " max_residual_ydeg=" << c.max_residual_ydeg;
            if (!canonical) os << " ms=" << (long long)c.ms;
            os << " :: " << c.identity;
            if (!c.pass && !c.offending.empty()) os << " | offending: " << c.offending;
            os << "\n";
        }
        os << "summary checks=" << checks_.size() << " passed=" << passed()
           << " failed=" << failed() << "\n";
        return os.str();
    }

    // FNV-1a over the canonical text.
    std::string canonical_hash() const {
        std::string text = to_text(true);
        uint64_t h = 1469598103934665603ull;
        for (unsigned char ch : text) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
        return std::string(buf);
    }

    std::string to_json() const {
        auto esc = [](const std::string& s) {
            std::string r;
            for (char c : s) {
                if (c == '"' || c == '\\') {
                    r += '\\';
                    r += c;
                } else if (c == '\n') {
                    r += "\\n";
                } else {
                    r += c;
                }
            }
            return r;
        };
        std::ostringstream os;
        os << "{\n  \"info\": [";
        for (size_t i = 0; i < infos_.size(); ++i) {
            if (i) os << ",";
            os << "\n    {\"name\": \"" << esc(infos_[i].name) << "\", \"text\": \""
               << esc(infos_[i].text) << "\"}";
        }
        os << "\n  ],\n  \"checks\": [";
        for (size_t i = 0; i < checks_.size(); ++i) {
            const auto& c = checks_[i];
            if (i) os << ",";
            os << "\n    {\"name\": \"" << esc(c.name) << "\", \"pass\": "
               << (c.pass ? "true" : "false") << ", \"residual_terms\": " << c.residual_terms
               << ", \"max_residual_ydeg\": " << c.max_residual_ydeg << ", \"ms\": " << (long long)c.ms
               << ", \"identity\": \"" << esc(c.identity) << "\"}";
        }
        os << "\n  ],\n  \"summary\": {\"checks\": " << checks_.size() << ", \"passed\": " << passed()
           << ", \"failed\": " << failed() << "},\n  \"canonical_hash\": \"" << canonical_hash()
           << "\"\n}\n";
        return os.str();
    }

  private:
    std::vector<CheckRecord> checks_;
    std::vector<InfoRecord> infos_;
};

// Timing helper; wall time lands in the record but never in the hash.
class CheckTimer {
  public:
    CheckTimer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

// Residual summaries for the record fields.
template <class K>
void record_residual(CheckRecord& rec, const Series<K>& residual) {
    rec.pass = residual.is_zero();
    rec.residual_terms = (long long)residual.term_count();
    rec.max_residual_ydeg = residual.is_zero() ? -1 : residual.max_y_degree();
}

template <class E>
void record_residual(CheckRecord& rec, const HbarSeries<E>& residual) {
    rec.pass = residual.is_zero();
    long long terms = 0;
    int maxy = -1;
    for (int k = 0; k <= residual.order(); ++k) {
        terms += (long long)residual[k].term_count();
        if (!residual[k].is_zero()) maxy = std::max(maxy, residual[k].max_y_degree());
    }
    rec.residual_terms = terms;
    rec.max_residual_ydeg = maxy;
}

}  // namespace fedra
