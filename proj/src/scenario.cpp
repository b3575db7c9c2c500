#include "skewq/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <memory>

#include <openssl/evp.h>

#include "skewq/error.hpp"

namespace skewq {

namespace {

std::string line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

bool is_number(const Json& j)
{
    return j.is_number();
}

void check_dims(const Scenario& s, std::vector<std::string>& problems)
{
    const Json& p = s.params;
    if (!p.contains("map"))
        return;
    try {
        const Matrix t = parse_matrix(p.at("map"), "params.map");
        if (!p.contains("source") || !p.contains("target")) {
            problems.push_back("params.map given without params.source and params.target");
            return;
        }
        const Law mu1 = parse_law(p.at("source"), "params.source");
        const Law mu2 = parse_law(p.at("target"), "params.target");
        if (t.cols() != law_dim(mu1))
            problems.push_back("params.map has " + std::to_string(t.cols()) + " columns but the source has dimension " +
                               std::to_string(law_dim(mu1)));
        if (t.rows() != law_dim(mu2))
            problems.push_back("params.map has " + std::to_string(t.rows()) + " rows but the target has dimension " +
                               std::to_string(law_dim(mu2)));
        if (mu1.index() != mu2.index())
            problems.push_back("params.source and params.target must be of the same law type");
    } catch (const Error& e) {
        problems.push_back(e.what());
    }
}

} // namespace

const std::vector<std::string>& scenario_kinds()
{
    static const std::vector<std::string> kinds{
        "chaos_isometry", "gaussian_diagram", "independence",   "mehler_contraction", "mehler_identity",
        "ou_semigroup",   "poisson_chaos",    "poisson_diagram", "rkhs_restriction",  "skew_factor",
        "stroock",
    };
    return kinds;
}

Scenario scenario_from_json(const Json& j, const std::string& where)
{
    if (!j.is_object())
        throw ParseError(where + ": scenario must be an object");
    for (const auto& [key, value] : j.items())
        if (key != "id" && key != "kind" && key != "seed" && key != "params")
            throw ParseError(where + "." + key + ": unknown field");
    Scenario s;
    if (!j.contains("id") || !j.at("id").is_string())
        throw ParseError(where + ".id: required string");
    s.id = j.at("id").get<std::string>();
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ParseError(where + ".kind: required string");
    s.kind = j.at("kind").get<std::string>();
    if (j.contains("seed")) {
        const Json& seed = j.at("seed");
        if (!seed.is_number_unsigned())
            throw ParseError(where + ".seed: expected a non-negative integer");
        s.seed = seed.get<std::uint64_t>();
    }
    if (j.contains("params")) {
        if (!j.at("params").is_object())
            throw ParseError(where + ".params: expected an object");
        s.params = j.at("params");
    }
    return s;
}

Json scenario_to_json(const Scenario& s)
{
    return Json{{"id", s.id}, {"kind", s.kind}, {"seed", s.seed}, {"params", s.params}};
}

std::vector<Scenario> parse_scenarios(std::string_view text, const std::string& origin)
{
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ParseError(origin + ": " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
    }
    std::vector<Scenario> out;
    const Json* list = nullptr;
    std::string prefix;
    if (doc.is_array()) {
        list = &doc;
        prefix = origin;
    } else if (doc.is_object() && doc.contains("scenarios")) {
        if (doc.size() != 1)
            throw ParseError(origin + ": a scenario list may only contain the key \"scenarios\"");
        list = &doc.at("scenarios");
        if (!list->is_array())
            throw ParseError(origin + ".scenarios: expected an array");
        prefix = origin + ".scenarios";
    } else {
        out.push_back(scenario_from_json(doc, origin));
        return out;
    }
    for (std::size_t i = 0; i < list->size(); ++i)
        out.push_back(scenario_from_json((*list)[i], prefix + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<Scenario> load_scenarios(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenarios(buf.str(), path);
}

std::string canonical_text(const Scenario& s)
{
    return scenario_to_json(s).dump();
}

std::string git_blob_hash(std::string_view text)
{
    const std::string header = "blob " + std::to_string(text.size()) + '\0';
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), text.data(), text.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1)
        throw std::runtime_error("git_blob_hash: SHA-1 digest failed");
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < length; ++i) {
        const unsigned char c = digest[i];
        std::snprintf(byte, sizeof byte, "%02x", c);
        hex += byte;
    }
    return hex;
}

void validate(const Scenario& s)
{
    std::vector<std::string> problems;
    if (s.id.empty())
        problems.push_back("id must not be empty");
    const auto& kinds = scenario_kinds();
    if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
        problems.push_back("kind \"" + s.kind + "\" is not one of the known experiment kinds");
    for (const auto& [key, value] : s.params.items()) {
        const bool tolerance = key.find("tolerance") != std::string::npos;
        if (tolerance && (!is_number(value) || !(value.get<double>() > 0.0)))
            problems.push_back("params." + key + " must be a positive number");
        static const char* counts[] = {"valid",     "invalid",       "max_dim",   "probes",    "count",
                                       "functions", "samples",       "truncation", "max_degree", "polynomials",
                                       "sets",      "max_functionals", "pairs",   "triples",   "functionals",
                                       "random_triples", "gaussian_triples", "jump_triples", "cases", "max_atoms",
                                       "exp_truncation"};
        for (const char* c : counts)
            if (key == c && !(value.is_number_integer() && value.get<std::int64_t>() >= 0))
                problems.push_back("params." + key + " must be a non-negative integer");
    }
    if (s.params.contains("max_dim") && s.params.at("max_dim").is_number_integer() &&
        s.params.at("max_dim").get<std::int64_t>() == 0)
        problems.push_back("params.max_dim must be at least 1");
    check_dims(s, problems);
    if (!problems.empty()) {
        std::string msg = "scenario \"" + s.id + "\":";
        for (const auto& p : problems)
            msg += " " + p + ";";
        msg.pop_back();
        throw ValidationError(msg);
    }
}

Matrix parse_matrix(const Json& j, const std::string& field)
{
    if (!j.is_array() || j.empty())
        throw ParseError(field + ": expected a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ParseError(field + "[" + std::to_string(r) + "]: rows must be arrays of equal length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number())
                throw ParseError(field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]: expected a number");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return m;
}

Vector parse_vector(const Json& j, const std::string& field)
{
    if (!j.is_array())
        throw ParseError(field + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ParseError(field + "[" + std::to_string(i) + "]: expected a number");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

AtomicLevyMeasure parse_levy(const Json& j, int dim, const std::string& field)
{
    if (!j.contains("atoms") || !j.contains("weights"))
        throw ParseError(field + ": jump measures need \"atoms\" and \"weights\"");
    const Json& atoms = j.at("atoms");
    if (!atoms.is_array())
        throw ParseError(field + ".atoms: expected an array of points");
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        pts.push_back(parse_vector(atoms[i], field + ".atoms[" + std::to_string(i) + "]"));
        if (pts.back().size() != dim)
            throw ParseError(field + ".atoms[" + std::to_string(i) + "]: expected " + std::to_string(dim) +
                             " coordinates");
    }
    const Vector w = parse_vector(j.at("weights"), field + ".weights");
    if (static_cast<std::size_t>(w.size()) != pts.size())
        throw ParseError(field + ".weights: one weight per atom required");
    try {
        return AtomicLevyMeasure(dim, std::move(pts), std::vector<double>(w.data(), w.data() + w.size()));
    } catch (const Error& e) {
        throw ParseError(field + ": " + e.what());
    }
}

Law parse_law(const Json& j, const std::string& field)
{
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw ParseError(field + ": law needs a string \"type\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "gaussian") {
        if (!j.contains("covariance"))
            throw ParseError(field + ".covariance: required");
        const Matrix q = parse_matrix(j.at("covariance"), field + ".covariance");
        if (q.rows() != q.cols())
            throw ParseError(field + ".covariance: must be square");
        try {
            return GaussianLaw(q);
        } catch (const Error& e) {
            throw ParseError(field + ".covariance: " + e.what());
        }
    }
    if (type == "compound_poisson") {
        if (!j.contains("shift"))
            throw ParseError(field + ".shift: required");
        Vector shift = parse_vector(j.at("shift"), field + ".shift");
        const int dim = static_cast<int>(shift.size());
        return CompoundPoissonLaw(std::move(shift), parse_levy(j, dim, field));
    }
    throw ParseError(field + ".type: expected \"gaussian\" or \"compound_poisson\"");
}

Json matrix_to_json(const Matrix& m)
{
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const Vector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

} // namespace skewq
