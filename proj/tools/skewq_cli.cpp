#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewq/error.hpp"
#include "skewq/report.hpp"
#include "skewq/scenario.hpp"
#include "skewq/suites.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"skewq: skew maps, Mehler semigroups and chaos expansions"};
    std::vector<std::string> scenario_paths;
    std::vector<std::string> builtins;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> truncation;
    unsigned jobs = 1;
    std::string out_dir;
    std::string format = "json";
    bool list = false;

    app.add_option("--scenario", scenario_paths, "scenario file(s)");
    app.add_option("--builtin", builtins, "builtin scenario id(s)");
    app.add_option("--seed", seed, "override the master seed");
    app.add_option("--samples", samples, "override Monte Carlo sample counts");
    app.add_option("--truncation", truncation, "override chaos truncation");
    app.add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "directory for report.csv / report.json");
    app.add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_flag("--list", list, "print the builtin catalogue");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list) {
        std::cout << skewq::catalogue_listing();
        return 0;
    }

    std::vector<skewq::Report> reports;
    try {
        std::vector<skewq::Scenario> scenarios;
        for (const auto& path : scenario_paths)
            for (auto& s : skewq::load_scenarios(path))
                scenarios.push_back(std::move(s));
        for (const auto& id : builtins)
            scenarios.push_back(skewq::builtin_scenario(id));
        const skewq::Overrides overrides{seed, samples, truncation};
        for (auto& s : scenarios)
            s = skewq::apply_overrides(std::move(s), overrides);
        reports = skewq::run_batch(scenarios, jobs);
    } catch (const skewq::Error& e) {
        std::cerr << "skewq: " << e.what() << '\n';
        return 2;
    }

    const bool csv = format != "json";
    const bool json = format != "csv";
    try {
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            if (csv)
                write_file(std::filesystem::path(out_dir) / "report.csv", skewq::report_csv(reports));
            if (json)
                write_file(std::filesystem::path(out_dir) / "report.json", skewq::report_json(reports).dump(2) + "\n");
            for (const auto& r : reports)
                std::cout << r.id << ' ' << (r.verdict() ? "PASS" : "FAIL")
                          << (r.error ? " (" + r.error->name + ")" : std::string()) << '\n';
        } else {
            if (csv)
                std::cout << skewq::report_csv(reports);
            if (json)
                std::cout << skewq::report_json(reports).dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "skewq: " << e.what() << '\n';
        return 2;
    }
    return skewq::batch_verdict(reports) ? 0 : 1;
}
