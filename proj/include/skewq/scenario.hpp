#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skewq/linalg.hpp"
#include "skewq/measures.hpp"

namespace skewq {

using Json = nlohmann::json;

/// One experiment: a kind, a master seed and kind-specific parameters.
struct Scenario {
    std::string id;
    std::string kind;
    std::uint64_t seed = 1;
    Json params = Json::object();
};

const std::vector<std::string>& scenario_kinds();

/// Accepts a single scenario object, an array of them, or
/// {"scenarios": [...]}. Throws ParseError with line/column for malformed
/// text and with the field path for malformed entries.
std::vector<Scenario> parse_scenarios(std::string_view text, const std::string& origin = "<input>");
std::vector<Scenario> load_scenarios(const std::string& path);

Scenario scenario_from_json(const Json& j, const std::string& where);
Json scenario_to_json(const Scenario& s);

/// Compact dump with sorted keys and shortest round-trip numbers.
std::string canonical_text(const Scenario& s);
/// git blob id: sha1("blob <len>\0" + text) in lowercase hex.
std::string git_blob_hash(std::string_view text);

/// Collects every violated invariant and throws one ValidationError.
void validate(const Scenario& s);

// Typed readers for parameter fields; errors name the field.
Matrix parse_matrix(const Json& j, const std::string& field);
Vector parse_vector(const Json& j, const std::string& field);
/// {"type": "gaussian", "covariance": [[...]]} or
/// {"type": "compound_poisson", "shift": [...], "atoms": [[...]], "weights": [...]}.
Law parse_law(const Json& j, const std::string& field);
AtomicLevyMeasure parse_levy(const Json& j, int dim, const std::string& field);

Json matrix_to_json(const Matrix& m);
Json vector_to_json(const Vector& v);

} // namespace skewq
