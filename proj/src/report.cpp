#include "skewq/report.hpp"

#include <charconv>
#include <cmath>

namespace skewq {

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

Json number(double x)
{
    if (std::isfinite(x))
        return x;
    return format_double(x);
}

} // namespace

bool Report::verdict() const
{
    if (error)
        return false;
    for (const auto& r : rows)
        if (!r.pass)
            return false;
    return true;
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string report_csv(const std::vector<Report>& reports, bool include_runtime)
{
    std::string out = "id,hash,name,lhs,rhs,residual,tolerance,pass,method,seed";
    out += include_runtime ? ",runtime_ms\n" : "\n";
    for (const auto& rep : reports) {
        auto line = [&](const ReportRow& r) {
            out += csv_field(rep.id) + ',' + rep.hash + ',' + csv_field(r.name) + ',' + format_double(r.lhs) + ',' +
                   format_double(r.rhs) + ',' + format_double(r.residual) + ',' + format_double(r.tolerance) + ',' +
                   (r.pass ? "true" : "false") + ',' + csv_field(r.method) + ',' + std::to_string(r.seed);
            if (include_runtime)
                out += ',' + format_double(r.runtime_ms);
            out += '\n';
        };
        for (const auto& r : rep.rows)
            line(r);
        if (rep.error) {
            ReportRow r;
            r.name = "error:" + rep.error->name;
            r.lhs = r.rhs = r.residual = r.tolerance = std::nan("");
            r.method = rep.error->message;
            r.seed = rep.seed;
            line(r);
        }
    }
    return out;
}

Json report_json(const std::vector<Report>& reports, bool include_runtime)
{
    Json list = Json::array();
    for (const auto& rep : reports) {
        Json rows = Json::array();
        for (const auto& r : rep.rows) {
            Json row{{"name", r.name},           {"lhs", number(r.lhs)},
                     {"rhs", number(r.rhs)},     {"residual", number(r.residual)},
                     {"tolerance", number(r.tolerance)}, {"pass", r.pass},
                     {"method", r.method},       {"seed", r.seed}};
            if (include_runtime)
                row["runtime_ms"] = number(r.runtime_ms);
            rows.push_back(std::move(row));
        }
        Json j{{"id", rep.id},     {"kind", rep.kind}, {"hash", rep.hash},
               {"seed", rep.seed}, {"rows", std::move(rows)}, {"verdict", rep.verdict() ? "pass" : "fail"}};
        if (rep.error)
            j["error"] = Json{{"name", rep.error->name}, {"message", rep.error->message}};
        list.push_back(std::move(j));
    }
    return Json{{"reports", std::move(list)},
                {"count", reports.size()},
                {"verdict", batch_verdict(reports) ? "pass" : "fail"}};
}

bool batch_verdict(const std::vector<Report>& reports)
{
    for (const auto& r : reports)
        if (!r.verdict())
            return false;
    return true;
}

} // namespace skewq
