#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace bipot {

/// Version of the flat report format written by every checker and the CLI.
inline constexpr const char* kReportSchemaVersion = "1.2.0";
const char* report_schema_version();

/// Verdict of a predicate checker plus the evidence for a failure.
struct CheckReport {
    std::string check;
    bool passed = true;
    /// Label of the failing condition ("a", "b", "c", "convexity", ...). Empty on pass.
    std::string axiom;
    /// Human-readable witness (coordinates of the violating tuple).
    std::string witness;
    /// Node indices attached to the witness; their meaning is per check.
    std::vector<std::size_t> witness_nodes;
    double residual = 0.0;
    /// Extra key/value facts (tolerances, grid metadata, caps, seeds).
    std::vector<std::pair<std::string, std::string>> details;

    static CheckReport pass(std::string check)
    {
        CheckReport r;
        r.check = std::move(check);
        return r;
    }
    CheckReport& fail(std::string ax, std::string wit, double res);
    CheckReport& note(std::string key, std::string value);
    CheckReport& note(std::string key, double value);
    /// Value of a details key, or empty.
    std::string detail(const std::string& key) const;
};

/// Flat `key=value` text; the first line is `schema=<version>`.
std::string serialize(const CheckReport& r);
/// Appends `prefix.key=value` lines (no schema line) for nesting in a larger report.
/// An empty prefix gives bare keys.
void serialize_into(std::string& out, const CheckReport& r, const std::string& prefix);

} // namespace bipot
