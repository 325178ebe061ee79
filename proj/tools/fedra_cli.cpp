// Batch front end: load a scenario, run the selected verification suites,
// emit a line-oriented report (or JSON) with a canonical hash.
//
// Exit codes: 0 all checks pass, 1 at least one check failed,
// 2 usage or configuration errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "fedra/suites.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    bool json = false;
    std::optional<uint64_t> seed;
    std::optional<int> ny;
    std::optional<int> nhbar;
    std::string suite_list;
};

std::set<std::string> suites_for(const std::string& subcommand) {
    if (subcommand == "check") return {"homotopy", "brackets", "comparison"};
    if (subcommand == "fedosov") return {"fedosov"};
    if (subcommand == "moyal") return {"moyal"};
    if (subcommand == "linfty") return {"linfty"};
    return {};  // all
}

int run(const std::string& subcommand, const Options& opt) {
    fedra::Scenario sc;
    try {
        sc = fedra::load_scenario(opt.config);
        if (opt.seed) sc.seed = *opt.seed;
        if (opt.ny) sc.ny = *opt.ny;
        if (opt.nhbar) sc.nhbar = *opt.nhbar;
        if (!opt.suite_list.empty()) {
            sc.suites.clear();
            std::istringstream ss(opt.suite_list);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) sc.suites.insert(item);
        }
        sc.validate();
    } catch (const fedra::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fedra::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    std::set<std::string> chosen = sc.suites;
    if (chosen.empty()) chosen = suites_for(subcommand);

    fedra::Report rep;
    try {
        rep = fedra::run_suites(sc, chosen);
    } catch (const fedra::CapacityError& e) {
        std::cerr << "capacity error (" << e.param << "): " << e.what() << "\n";
        return 2;
    }

    std::ostringstream body;
    if (opt.json) {
        body << rep.to_json();
    } else {
        body << "fedra " << subcommand << " report\n";
        body << "config " << fedra::scenario_summary(sc) << "\n";
        body << rep.to_text(false);
        body << "canonical_hash " << rep.canonical_hash() << "\n";
    }

    if (!opt.out.empty()) {
        std::ofstream os(opt.out);
        if (!os) {
            std::cerr << "cannot write report to " << opt.out << "\n";
            return 2;
        }
        os << body.str();
    } else {
        std::cout << body.str();
    }
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification suites for the Fedosov-Hochschild calculus"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config, "scenario file")->required();
        cmd->add_option("--out", opt.out, "write the report to a file instead of stdout");
        cmd->add_flag("--json", opt.json, "emit one JSON document");
        cmd->add_option("--seed", opt.seed, "override the scenario seed");
        cmd->add_option("--ny", opt.ny, "override the fiber truncation order");
        cmd->add_option("--nhbar", opt.nhbar, "override the hbar truncation order");
        cmd->add_option("--suite", opt.suite_list, "comma-separated suite selection");
    };

    std::vector<std::string> names{"check", "fedosov", "moyal", "linfty", "all"};
    for (const auto& n : names) {
        CLI::App* cmd = app.add_subcommand(n);
        add_common(cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& n : names)
        if (app.got_subcommand(n)) return run(n, opt);
    return 2;
}
