#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewq/report.hpp"
#include "skewq/scenario.hpp"

namespace skewq {

/// Command-line overrides applied on top of a scenario's own settings.
struct Overrides {
    std::optional<std::uint64_t> seed;
    /// Monte Carlo sample / path count ("samples").
    std::optional<std::uint64_t> samples;
    /// Chaos truncation ("truncation").
    std::optional<std::uint64_t> truncation;
};

Scenario apply_overrides(Scenario s, const Overrides& o);

/// Validates and runs one scenario. Library errors raised while running are
/// captured in Report::error; validation errors propagate.
Report run_scenario(const Scenario& s, unsigned workers = 1);

/// Runs up to `jobs` scenarios concurrently, splitting the worker budget
/// between them. Reports come back ordered by id (stable for equal ids).
std::vector<Report> run_batch(const std::vector<Scenario>& scenarios, unsigned jobs = 1);

struct BuiltinScenario {
    Scenario scenario;
    std::string description;
};

/// The shipped scenarios, one per acceptance property, ordered by id.
const std::vector<BuiltinScenario>& builtin_catalogue();
/// Throws ValidationError for an unknown id.
Scenario builtin_scenario(const std::string& id);
/// One line per entry: "<id>\t<kind>\t<description>\n".
std::string catalogue_listing();

} // namespace skewq
