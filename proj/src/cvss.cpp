#include "vulncluster/cvss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "vulncluster/errors.hpp"

namespace vulncluster::cvss {

namespace {

constexpr std::array<std::string_view, 8> kBaseMetrics = {"AV", "AC", "PR", "UI",
                                                          "S",  "C",  "I",  "A"};

bool is_base_metric(std::string_view code) {
    return std::find(kBaseMetrics.begin(), kBaseMetrics.end(), code) != kBaseMetrics.end();
}

double metric_weight(const MetricVector& v, const std::string& code, bool scope_changed) {
    const auto value = v.metric(code);
    if (!value) throw ScoringError("missing base metric: " + code);
    const std::string& val = *value;

    if (code == "AV") {
        if (val == "N") return 0.85;
        if (val == "A") return 0.62;
        if (val == "L") return 0.55;
        if (val == "P") return 0.2;
    } else if (code == "AC") {
        if (val == "L") return 0.77;
        if (val == "H") return 0.44;
    } else if (code == "PR") {
        if (val == "N") return 0.85;
        if (val == "L") return scope_changed ? 0.68 : 0.62;
        if (val == "H") return scope_changed ? 0.50 : 0.27;
    } else if (code == "UI") {
        if (val == "N") return 0.85;
        if (val == "R") return 0.62;
    } else if (code == "C" || code == "I" || code == "A") {
        if (val == "H") return 0.56;
        if (val == "L") return 0.22;
        if (val == "N") return 0.0;
    }
    throw ScoringError("illegal value '" + val + "' for metric " + code);
}

// Ceiling to one decimal, computed on integers so that values sitting on a
// representable tenth do not get bumped by floating-point noise.
double round_up_one_decimal(double x) {
    const long long scaled = std::llround(x * 100000.0);
    if (scaled % 10000 == 0) return static_cast<double>(scaled) / 100000.0;
    return static_cast<double>(scaled / 10000 + 1) / 10.0;
}

}  // namespace

MetricVector parse_metric_vector(const std::string& raw) {
    if (raw.empty()) throw ParseError("empty metric vector");

    std::vector<std::string> segments;
    std::size_t start = 0;
    while (true) {
        std::size_t slash = raw.find('/', start);
        segments.push_back(raw.substr(start, slash - start));
        if (slash == std::string::npos) break;
        start = slash + 1;
    }

    MetricVector v;
    v.scheme = segments.front();
    const std::size_t scheme_colon = v.scheme.find(':');
    if (v.scheme.empty() || scheme_colon == std::string::npos ||
        is_base_metric(std::string_view(v.scheme).substr(0, scheme_colon)))
        throw ParseError("metric vector lacks a scheme prefix: " + raw);

    for (std::size_t i = 1; i < segments.size(); ++i) {
        const std::string& seg = segments[i];
        std::size_t colon = seg.find(':');
        if (colon == std::string::npos || colon == 0)
            throw ParseError("metric segment without CODE:VALUE form: '" + seg + "'");
        std::string code = seg.substr(0, colon);
        std::string value = seg.substr(colon + 1);
        const bool seen =
            v.metric(code).has_value() ||
            std::any_of(v.extras.begin(), v.extras.end(),
                        [&](const auto& p) { return p.first == code; });
        if (seen) throw ParseError("repeated metric code: " + code);
        if (is_base_metric(code))
            v.metrics.emplace_back(std::move(code), std::move(value));
        else
            v.extras.emplace_back(std::move(code), std::move(value));
    }
    return v;
}

std::string serialize(const MetricVector& v) {
    std::string out = v.scheme;
    for (const auto& [code, value] : v.metrics) out += "/" + code + ":" + value;
    for (const auto& [code, value] : v.extras) out += "/" + code + ":" + value;
    return out;
}

double base_score(const MetricVector& v) {
    const auto scope = v.metric("S");
    if (!scope) throw ScoringError("missing base metric: S");
    bool changed;
    if (*scope == "C")
        changed = true;
    else if (*scope == "U")
        changed = false;
    else
        throw ScoringError("illegal value '" + *scope + "' for metric S");

    const double conf = metric_weight(v, "C", changed);
    const double integ = metric_weight(v, "I", changed);
    const double avail = metric_weight(v, "A", changed);
    const double iss = 1.0 - (1.0 - conf) * (1.0 - integ) * (1.0 - avail);

    const double impact = changed
                              ? 7.52 * (iss - 0.029) - 3.25 * std::pow(iss - 0.02, 15.0)
                              : 6.42 * iss;

    const double exploitability = 8.22 * metric_weight(v, "AV", changed) *
                                  metric_weight(v, "AC", changed) *
                                  metric_weight(v, "PR", changed) *
                                  metric_weight(v, "UI", changed);

    if (impact <= 0.0) return 0.0;
    const double raw = changed ? 1.08 * (impact + exploitability) : impact + exploitability;
    return round_up_one_decimal(std::min(raw, 10.0));
}

}  // namespace vulncluster::cvss
