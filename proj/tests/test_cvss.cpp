#include "vulncluster/cvss.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "vulncluster/errors.hpp"

using namespace vulncluster;

TEST_CASE("parse rejects malformed vectors") {
    CHECK_THROWS_AS(cvss::parse_metric_vector(""), ParseError);
    // A vector starting with a metric has no scheme prefix.
    CHECK_THROWS_AS(cvss::parse_metric_vector("AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"),
                    ParseError);
    CHECK_THROWS_AS(cvss::parse_metric_vector("CVSS:3.0/AVN"), ParseError);
    CHECK_THROWS_AS(cvss::parse_metric_vector("CVSS:3.0/:N"), ParseError);
    CHECK_THROWS_AS(cvss::parse_metric_vector("CVSS:3.0/AV:N/AV:L"), ParseError);
    CHECK_THROWS_AS(cvss::parse_metric_vector("CVSS:3.0/X:1/X:2"), ParseError);
}

TEST_CASE("parse splits scheme, base metrics, and extras") {
    const auto v =
        cvss::parse_metric_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");
    CHECK(v.scheme == "CVSS:3.0");
    CHECK(v.metrics.size() == 8);
    CHECK(v.extras.empty());
    CHECK(v.metric("AV") == std::string("N"));
    CHECK(v.metric("A") == std::string("H"));
    CHECK_FALSE(v.metric("E").has_value());

    const auto r =
        cvss::parse_metric_vector("RVSS:1.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/H:U");
    CHECK(r.scheme == "RVSS:1.0");
    CHECK(r.metrics.size() == 8);
    REQUIRE(r.extras.size() == 1);
    CHECK(r.extras[0].first == "H");
    CHECK(r.extras[0].second == "U");
}

TEST_CASE("serialize round-trips parse") {
    const std::vector<std::string> vectors = {
        "CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H",
        "RVSS:1.0/AV:A/AC:H/PR:L/UI:R/S:C/C:H/I:L/A:L/H:U",
        "CVSS:3.0/AV:P/AC:L/PR:H/UI:N/S:U/C:L/I:L/A:N",
    };
    for (const auto& raw : vectors) {
        CAPTURE(raw);
        CHECK(cvss::serialize(cvss::parse_metric_vector(raw)) == raw);
    }
}

TEST_CASE("base score matches the reference calculator") {
    // Expected values were frozen from an independent implementation of the
    // official v3.0 base equations.
    const std::vector<std::pair<std::string, double>> cases = {
        {"CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H", 9.8},
        {"CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N", 0.0},
        {"CVSS:3.0/AV:L/AC:H/PR:H/UI:R/S:U/C:L/I:N/A:N", 1.8},
        {"CVSS:3.0/AV:A/AC:H/PR:L/UI:R/S:C/C:H/I:L/A:L", 6.8},
        {"CVSS:3.0/AV:N/AC:L/PR:L/UI:N/S:C/C:H/I:H/A:H", 9.9},
        {"CVSS:3.0/AV:P/AC:L/PR:H/UI:N/S:U/C:L/I:L/A:N", 2.9},
        {"CVSS:3.0/AV:N/AC:L/PR:N/UI:R/S:C/C:L/I:L/A:N", 6.1},
        {"CVSS:3.0/AV:L/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H", 7.8},
    };
    for (const auto& [raw, expected] : cases) {
        CAPTURE(raw);
        CHECK(cvss::base_score(cvss::parse_metric_vector(raw)) == expected);
    }
}

TEST_CASE("extra metrics do not change the base score") {
    const auto plain =
        cvss::parse_metric_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");
    const auto extended = cvss::parse_metric_vector(
        "RVSS:1.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/H:U/Y:Z");
    CHECK(cvss::base_score(plain) == cvss::base_score(extended));
}

TEST_CASE("scoring errors name the offending metric") {
    const auto missing =
        cvss::parse_metric_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H");
    CHECK_THROWS_WITH_AS(cvss::base_score(missing), "missing base metric: A", ScoringError);

    const auto illegal =
        cvss::parse_metric_vector("CVSS:3.0/AV:X/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");
    CHECK_THROWS_WITH_AS(cvss::base_score(illegal), "illegal value 'X' for metric AV",
                         ScoringError);

    const auto bad_scope =
        cvss::parse_metric_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:Q/C:H/I:H/A:H");
    CHECK_THROWS_AS(cvss::base_score(bad_scope), ScoringError);
}

TEST_CASE("privilege weights shift when scope changes") {
    // Same metrics except scope: changed scope raises PR:L from 0.62 to 0.68
    // and applies the changed-impact curve, so the scores must differ.
    const auto unchanged =
        cvss::parse_metric_vector("CVSS:3.0/AV:N/AC:L/PR:L/UI:N/S:U/C:L/I:L/A:N");
    const auto changed =
        cvss::parse_metric_vector("CVSS:3.0/AV:N/AC:L/PR:L/UI:N/S:C/C:L/I:L/A:N");
    CHECK(cvss::base_score(unchanged) < cvss::base_score(changed));
}
