#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewq/scenario.hpp"

namespace skewq {

/// One check. For equalities lhs/rhs are the compared quantities and
/// residual = |lhs - rhs|; for inequalities lhs <= rhs is tested and
/// residual = lhs - rhs. pass <=> residual <= tolerance.
struct ReportRow {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string method;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
};

struct ReportError {
    std::string name;
    std::string message;
};

struct Report {
    std::string id;
    std::string kind;
    std::string hash;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    std::optional<ReportError> error;

    /// AND of the rows; false on error.
    bool verdict() const;
};

/// Shortest round-trip decimal text ("nan", "inf", "-inf" for non-finite).
std::string format_double(double x);

/// Columns: id,hash,name,lhs,rhs,residual,tolerance,pass,method,seed,runtime_ms.
/// An errored scenario contributes a row named "error:<ErrorName>".
std::string report_csv(const std::vector<Report>& reports, bool include_runtime = true);
Json report_json(const std::vector<Report>& reports, bool include_runtime = true);

/// true iff every report passes (vacuously true for an empty batch).
bool batch_verdict(const std::vector<Report>& reports);

} // namespace skewq
