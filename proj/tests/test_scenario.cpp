#include <doctest.h>

#include <algorithm>
#include <string>

#include "skewq/error.hpp"
#include "skewq/report.hpp"
#include "skewq/scenario.hpp"
#include "skewq/suites.hpp"

using namespace skewq;

namespace {

const char* kBadSkew = R"({
  "id": "bad",
  "kind": "skew_factor",
  "params": {
    "map": [[2, 0], [0, 2]],
    "source": {"type": "gaussian", "covariance": [[1, 0], [0, 1]]},
    "target": {"type": "gaussian", "covariance": [[1, 0], [0, 1]]}
  }
})";

std::string message_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_SUITE("scenario")
{
    TEST_CASE("git blob hash")
    {
        CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
        CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    }

    TEST_CASE("document shapes")
    {
        CHECK(parse_scenarios(kBadSkew).size() == 1);
        CHECK(parse_scenarios("[]").empty());
        CHECK(parse_scenarios(R"({"scenarios": []})").empty());
        const auto two = parse_scenarios(R"([{"id":"a","kind":"stroock"},{"id":"b","kind":"independence","seed":5}])");
        REQUIRE(two.size() == 2);
        CHECK(two[0].seed == 1);
        CHECK(two[1].seed == 5);
    }

    TEST_CASE("malformed input reports the position")
    {
        const std::string m = message_of([] { parse_scenarios("{\n  \"id\": \"x\",\n  \"kind\": ,\n}", "f.json"); });
        CHECK(m.rfind("ParseError: f.json:", 0) == 0);
        CHECK(m.find("line 3") != std::string::npos);
        CHECK(m.find("column") != std::string::npos);
    }

    TEST_CASE("field errors name the field")
    {
        CHECK(message_of([] { parse_scenarios(R"({"id":"a","kind":"stroock","extra":1})", "s"); }).find("s.extra") !=
              std::string::npos);
        CHECK(message_of([] { parse_scenarios(R"([{"id":"a","kind":"stroock","seed":-1}])", "s"); }).find("s[0].seed") !=
              std::string::npos);
        CHECK(message_of([] { parse_scenarios(R"({"kind":"stroock"})", "s"); }).find("s.id") != std::string::npos);
        CHECK_THROWS_AS(parse_scenarios(R"({"id":"a","kind":"stroock","params":[]})"), ParseError);
    }

    TEST_CASE("validation lists every problem")
    {
        Scenario s;
        s.id = "";
        s.kind = "nonsense";
        s.params = Json{{"tolerance", -1.0}, {"probes", 2.5}, {"max_dim", 0}};
        const std::string m = message_of([&] { validate(s); });
        CHECK(m.rfind("ValidationError:", 0) == 0);
        CHECK(m.find("id") != std::string::npos);
        CHECK(m.find("nonsense") != std::string::npos);
        CHECK(m.find("params.tolerance") != std::string::npos);
        CHECK(m.find("params.probes") != std::string::npos);
        CHECK(m.find("params.max_dim") != std::string::npos);

        Scenario d = parse_scenarios(kBadSkew).front();
        d.params["map"] = Json::array({Json::array({1.0, 0.0, 0.0})});
        CHECK(message_of([&] { validate(d); }).find("params.map") != std::string::npos);
        d = parse_scenarios(kBadSkew).front();
        d.params.erase("target");
        CHECK_THROWS_AS(validate(d), ValidationError);
    }

    TEST_CASE("law readers")
    {
        const Law g = parse_law(Json::parse(R"({"type":"gaussian","covariance":[[2,0],[0,1]]})"), "x");
        CHECK(std::get<GaussianLaw>(g).covariance()(0, 0) == 2.0);
        const Law j = parse_law(Json::parse(R"({"type":"compound_poisson","shift":[1],"atoms":[[0.5]],"weights":[2]})"), "x");
        CHECK(std::get<CompoundPoissonLaw>(j).compensator()(0) == doctest::Approx(1.0));
        CHECK_THROWS_AS(parse_law(Json::parse(R"({"type":"cauchy"})"), "x"), ParseError);
        CHECK_THROWS_AS(parse_matrix(Json::parse("[[1,2],[3]]"), "m"), ParseError);
        const Matrix m = parse_matrix(matrix_to_json(Matrix::Identity(2, 3) * 0.1), "m");
        CHECK(m(1, 1) == 0.1);
        CHECK(parse_vector(vector_to_json(Vector::Constant(3, 1.0 / 3.0)), "v")(2) == 1.0 / 3.0);
    }

    TEST_CASE("report formatting")
    {
        CHECK(format_double(0.1) == "0.1");
        CHECK(format_double(1e-10) == "1e-10");
        CHECK(format_double(std::nan("")) == "nan");
        CHECK(format_double(-INFINITY) == "-inf");
        Report r;
        r.id = "x";
        r.kind = "stroock";
        r.hash = "abc";
        r.rows.push_back(ReportRow{"row", 1.0, 1.0, 0.0, 1e-9, true, "exact", 3, 12.5});
        CHECK(r.verdict());
        const std::string csv = report_csv({r}, false);
        CHECK(csv == "id,hash,name,lhs,rhs,residual,tolerance,pass,method,seed\nx,abc,row,1,1,0,1e-09,true,exact,3\n");
        CHECK(report_csv({r}).find(",12.5\n") != std::string::npos);
        r.error = ReportError{"NotASkewMap", "boom"};
        CHECK_FALSE(r.verdict());
        CHECK(report_csv({r}, false).find("error:NotASkewMap") != std::string::npos);
        const Json j = report_json({r}, false);
        CHECK(j.at("verdict") == "fail");
        CHECK(j.at("reports")[0].at("error").at("name") == "NotASkewMap");
        CHECK(batch_verdict({}));
        CHECK(report_json({}).at("count") == 0);
    }

    TEST_CASE("builtin catalogue")
    {
        const auto& cat = builtin_catalogue();
        CHECK(cat.size() >= 11);
        CHECK(std::is_sorted(cat.begin(), cat.end(),
                             [](const BuiltinScenario& a, const BuiltinScenario& b) { return a.scenario.id < b.scenario.id; }));
        for (const BuiltinScenario& b : cat) {
            CHECK_NOTHROW(validate(b.scenario));
            const auto back = parse_scenarios(canonical_text(b.scenario));
            REQUIRE(back.size() == 1);
            CHECK(canonical_text(back[0]) == canonical_text(b.scenario));
        }
        CHECK(catalogue_listing() == catalogue_listing());
        CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), ValidationError);
    }

    TEST_CASE("running scenarios")
    {
        const Report bad = run_scenario(parse_scenarios(kBadSkew).front());
        REQUIRE(bad.error.has_value());
        CHECK(bad.error->name == "NotASkewMap");
        CHECK_FALSE(bad.verdict());
        CHECK(bad.hash == git_blob_hash(canonical_text(parse_scenarios(kBadSkew).front())));

        Scenario s = builtin_scenario("gauss-chaos-isometry");
        const Report a = run_scenario(s);
        const Report b = run_scenario(s);
        CHECK(a.verdict());
        CHECK(report_csv({a}, false) == report_csv({b}, false));
        CHECK(report_json({a}, false).dump() == report_json({b}, false).dump());

        Overrides o;
        o.seed = 99;
        o.truncation = 3;
        const Scenario t = apply_overrides(s, o);
        CHECK(t.seed == 99);
        CHECK(t.params.at("truncation") == 3);
        CHECK(run_scenario(t).hash != a.hash);
    }

    TEST_CASE("batches are ordered by id and deterministic across job counts")
    {
        std::vector<Scenario> batch{builtin_scenario("stroock"), builtin_scenario("gauss-chaos-isometry"),
                                    builtin_scenario("independence")};
        const auto one = run_batch(batch, 1);
        const auto three = run_batch(batch, 3);
        REQUIRE(one.size() == 3);
        CHECK(one[0].id == "gauss-chaos-isometry");
        CHECK(one[2].id == "stroock");
        CHECK(report_csv(one, false) == report_csv(run_batch(batch, 1), false));
        CHECK(batch_verdict(three));
        CHECK(run_batch({}, 2).empty());
    }
}
