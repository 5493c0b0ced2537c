#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vulncluster {

/// One vulnerability record as ingested from an RVD-style JSON export.
struct Ticket {
    std::string id;
    std::string title;
    std::string description;
    std::optional<std::string> vendor;
    std::optional<std::string> cve;
    std::optional<std::string> cwe;
    std::optional<double> severity_score;          // in [0, 10] when present
    std::optional<std::string> severity_vector;    // RVSS/CVSS-style metric vector
};

enum class SeveritySource { ExplicitScore, ComputedFromVector };

/// Ticket with a numeric severity resolved either from its explicit score
/// or from its metric vector.
struct ScoredTicket {
    Ticket ticket;
    double resolved_severity = 0.0;  // in [0, 10]
    SeveritySource severity_source = SeveritySource::ExplicitScore;
};

/// Parsed metric vector, e.g. "CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H".
/// Recognized base-metric codes live in `metrics` in input order; anything
/// else is preserved in `extras` and ignored by scoring.
struct MetricVector {
    std::string scheme;
    std::vector<std::pair<std::string, std::string>> metrics;
    std::vector<std::pair<std::string, std::string>> extras;

    std::optional<std::string> metric(const std::string& code) const {
        for (const auto& [c, v] : metrics)
            if (c == code) return v;
        return std::nullopt;
    }
};

}  // namespace vulncluster
