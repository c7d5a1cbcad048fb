#include "bipot/check_report.hpp"

#include "bipot/extreal.hpp"

namespace bipot {

const char* report_schema_version() { return kReportSchemaVersion; }

CheckReport& CheckReport::fail(std::string ax, std::string wit, double res)
{
    passed = false;
    axiom = std::move(ax);
    witness = std::move(wit);
    residual = res;
    return *this;
}

CheckReport& CheckReport::note(std::string key, std::string value)
{
    details.emplace_back(std::move(key), std::move(value));
    return *this;
}

CheckReport& CheckReport::note(std::string key, double value) { return note(std::move(key), format_real(value)); }

std::string CheckReport::detail(const std::string& key) const
{
    for (const auto& [k, v] : details) {
        if (k == key) {
            return v;
        }
    }
    return {};
}

void serialize_into(std::string& out, const CheckReport& r, const std::string& prefix)
{
    const std::string head = prefix.empty() ? prefix : prefix + ".";
    auto line = [&](const std::string& k, const std::string& v) {
        out += head;
        out += k;
        out += '=';
        out += v;
        out += '\n';
    };
    line("check", r.check);
    line("verdict", r.passed ? "pass" : "fail");
    line("axiom", r.axiom);
    line("witness", r.witness);
    std::string nodes;
    for (std::size_t i = 0; i < r.witness_nodes.size(); ++i) {
        if (i > 0) {
            nodes += ';';
        }
        nodes += std::to_string(r.witness_nodes[i]);
    }
    line("witness_nodes", nodes);
    line("residual", format_real(r.residual));
    for (const auto& [k, v] : r.details) {
        line(k, v);
    }
}

std::string serialize(const CheckReport& r)
{
    std::string out = "schema=";
    out += kReportSchemaVersion;
    out += '\n';
    serialize_into(out, r, "");
    return out;
}

} // namespace bipot
