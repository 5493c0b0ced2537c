#pragma once

#include <string>

#include "vulncluster/ticket.hpp"

namespace vulncluster::cvss {

/// Splits a vector string on '/'. The first segment is the scheme, the rest
/// are CODE:VALUE pairs. Throws ParseError on empty input, a segment without
/// ':' or a repeated metric code.
MetricVector parse_metric_vector(const std::string& raw);

/// Inverse of parse_metric_vector on recognized metrics and extras.
std::string serialize(const MetricVector& v);

/// CVSS v3.0 base score from the eight base metrics, rounded up to one
/// decimal. Throws ScoringError naming the metric that is missing or has an
/// illegal value. RVSS-only extra metrics are ignored.
double base_score(const MetricVector& v);

}  // namespace vulncluster::cvss
