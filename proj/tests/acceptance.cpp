// Runs every shipped acceptance scenario and checks its rows and runtime budget.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "skewq/report.hpp"
#include "skewq/suites.hpp"

namespace {

struct Criterion {
    int number;
    std::string title;
    std::string scenario;
    double budget_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "skew-factor correctness", "skew-factor", 5},
    {2, "contraction restriction", "rkhs-restriction", 5},
    {3, "P_T contraction", "mehler-contraction", 60},
    {4, "exponential-martingale identity", "mehler-identity", 10},
    {5, "Gaussian chaos isometry", "gauss-chaos-isometry", 10},
    {6, "Stroock formula", "stroock", 10},
    {7, "Gaussian commuting diagram", "gauss-diag-2d", 60},
    {8, "Poisson chaos", "poisson-chaos", 30},
    {9, "Poisson commuting diagram", "poisson-diagram", 60},
    {10, "OU/Mehler semigroup", "ou-semigroup", 120},
    {11, "independence certificate", "independence", 5},
};

} // namespace

int main()
{
    int failures = 0;
    for (const Criterion& c : kCriteria) {
        const auto start = std::chrono::steady_clock::now();
        const skewq::Report rep = skewq::run_scenario(skewq::builtin_scenario(c.scenario));
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = seconds < c.budget_s;
        const bool pass = rep.verdict() && in_budget;
        failures += !pass;
        std::printf("criterion %2d %-34s %s  (%.2f s / %.0f s budget, %zu rows)\n", c.number, c.title.c_str(),
                    pass ? "PASS" : "FAIL", seconds, c.budget_s, rep.rows.size());
        if (rep.error)
            std::printf("    error %s: %s\n", rep.error->name.c_str(), rep.error->message.c_str());
        for (const skewq::ReportRow& row : rep.rows)
            if (!row.pass)
                std::printf("    row %s residual %s > tolerance %s\n", row.name.c_str(),
                            skewq::format_double(row.residual).c_str(), skewq::format_double(row.tolerance).c_str());
        if (!in_budget)
            std::printf("    over the runtime budget\n");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(kCriteria.size()) - failures, kCriteria.size());
    return failures == 0 ? 0 : 1;
}
