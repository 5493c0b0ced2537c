#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vulncluster/kmeans.hpp"
#include "vulncluster/textproc.hpp"
#include "vulncluster/ticket.hpp"

namespace vulncluster::analysis {

/// Integer severity bucket: floor of the score, so a rational score between
/// two consecutive integers joins the lower integer group. 10.0 maps to 10.
/// Throws on scores outside [0, 10].
int bucket(double severity);

struct ClusterProfile {
    std::size_t cluster_index = 0;
    std::size_t size = 0;
    std::map<int, std::size_t> histogram;  // bucket -> count
    std::map<int, double> fractions;       // bucket -> count / size
    std::optional<std::string> label;      // human-assigned, via config
};

/// One profile per cluster index, counting tickets by severity bucket.
/// scored and assignments must be aligned by index.
std::vector<ClusterProfile> cluster_profiles(const std::vector<ScoredTicket>& scored,
                                             const std::vector<std::size_t>& assignments,
                                             std::size_t k);
std::vector<ClusterProfile> cluster_profiles(const std::vector<ScoredTicket>& scored,
                                             const kmeans::Clustering& clustering);

enum class KeywordStat { Sum, Mean, Max };

/// For each occupied bucket: aggregate each term's weight over the bucket's
/// documents (summed by default), rank descending with lexicographic
/// tie-break, keep the first top_n terms with positive statistic.
std::map<int, std::vector<std::string>> top_terms_per_bucket(
    const textproc::TfidfMatrix& matrix, const std::vector<ScoredTicket>& scored,
    std::size_t top_n = 15, KeywordStat stat = KeywordStat::Sum);

struct KeywordGroups {
    std::map<int, std::vector<std::string>> per_bucket_top;
    std::set<int> group_a_buckets;
    std::set<int> group_b_buckets;
    std::vector<std::string> unique_a;  // sorted, disjoint from unique_b
    std::vector<std::string> unique_b;
};

/// Unions the top terms of each group's buckets, then removes the
/// intersection of the two unions from both sides. Groups must be disjoint.
KeywordGroups keyword_groups(const std::map<int, std::vector<std::string>>& per_bucket,
                             const std::set<int>& group_a = {1, 2, 3, 4, 5, 6, 7},
                             const std::set<int>& group_b = {8, 9, 10});

/// Tickets per vendor, descending by count then by name. Tickets without a
/// vendor are grouped under "(unknown)".
std::vector<std::pair<std::string, std::size_t>> vendor_counts(
    const std::vector<Ticket>& tickets);

}  // namespace vulncluster::analysis
