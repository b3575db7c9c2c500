#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result run(const std::string& args)
{
    const std::string cmd = std::string(SKEWQ_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    Result r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string scenario(const char* name) { return std::string(SKEWQ_SCENARIO_DIR) + "/" + name; }

nlohmann::json strip_runtime(nlohmann::json j)
{
    for (auto& rep : j.at("reports"))
        for (auto& row : rep.at("rows"))
            row.erase("runtime_ms");
    return j;
}

fs::path temp_dir(const std::string& tag)
{
    const fs::path p = fs::temp_directory_path() / ("skewq_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("listing the catalogue")
{
    const Result a = run("--list");
    CHECK(a.status == 0);
    CHECK(a.out == run("--list").out);
    std::istringstream in(a.out);
    std::string line;
    int entries = 0;
    while (std::getline(in, line))
        entries += !line.empty();
    CHECK(entries >= 10);
    CHECK(a.out.find("gauss-diag-2d\t") != std::string::npos);
}

TEST_CASE("a passing builtin exits 0")
{
    const Result r = run("--builtin gauss-diag-2d --format json");
    CHECK(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("verdict") == "pass");
    CHECK(j.at("reports")[0].at("id") == "gauss-diag-2d");
}

TEST_CASE("a map that is not a skew map fails with its error name")
{
    const Result r = run("--scenario " + scenario("not-a-skew-map.json") + " --format csv");
    CHECK(r.status == 1);
    CHECK(r.out.find("error:NotASkewMap") != std::string::npos);
}

TEST_CASE("an empty scenario list passes with an empty report")
{
    const Result r = run("--scenario " + scenario("empty.json") + " --format json");
    CHECK(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("count") == 0);
    CHECK(j.at("reports").empty());
}

TEST_CASE("usage and parse errors exit 2")
{
    CHECK(run("--format xml").status == 2);
    CHECK(run("--jobs 0").status == 2);
    CHECK(run("--no-such-flag").status == 2);
    CHECK(run("--scenario /nonexistent/file.json").status == 2);
    CHECK(run("--builtin unknown-id").status == 2);

    const fs::path dir = temp_dir("parse");
    std::ofstream(dir / "broken.json") << "{\n  \"id\": \"x\",\n  \"kind\": \n";
    const Result r = run("--scenario " + (dir / "broken.json").string());
    CHECK(r.status == 2);
    CHECK(r.out.find("ParseError") != std::string::npos);
    CHECK(r.out.find("line") != std::string::npos);

    std::ofstream(dir / "invalid.json") << R"({"id":"x","kind":"stroock","params":{"tolerance":-1}})";
    const Result v = run("--scenario " + (dir / "invalid.json").string());
    CHECK(v.status == 2);
    CHECK(v.out.find("ValidationError") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("reports are reproducible apart from runtimes")
{
    const std::string args = "--scenario " + scenario("diag-triple.json") + " --builtin stroock --jobs 2 --format json";
    const Result a = run(args);
    const Result b = run(args);
    REQUIRE(a.status == 0);
    CHECK(strip_runtime(nlohmann::json::parse(a.out)).dump() == strip_runtime(nlohmann::json::parse(b.out)).dump());
}

TEST_CASE("writing reports to a directory")
{
    const fs::path dir = temp_dir("out");
    const Result r = run("--scenario " + scenario("jump-skew.json") + " --format both --seed 5 --out " + dir.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("jump-skew PASS") != std::string::npos);
    CHECK(fs::exists(dir / "report.csv"));
    REQUIRE(fs::exists(dir / "report.json"));
    std::ifstream in(dir / "report.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j.at("reports")[0].at("seed") == 5);
    fs::remove_all(dir);
}
