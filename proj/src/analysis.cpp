#include "vulncluster/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "vulncluster/errors.hpp"
#include "vulncluster/util.hpp"

namespace vulncluster::analysis {

int bucket(double severity) {
    if (!(severity >= 0.0 && severity <= 10.0))
        throw NumericError("severity outside [0, 10]: " + util::format_g12(severity));
    return static_cast<int>(std::floor(severity));
}

std::vector<ClusterProfile> cluster_profiles(const std::vector<ScoredTicket>& scored,
                                             const std::vector<std::size_t>& assignments,
                                             std::size_t k) {
    if (scored.size() != assignments.size())
        throw DimensionError("cluster_profiles: " + std::to_string(scored.size()) +
                             " tickets vs " + std::to_string(assignments.size()) +
                             " assignments");
    for (std::size_t a : assignments)
        if (a >= k) throw DimensionError("cluster_profiles: cluster index out of range");

    std::vector<ClusterProfile> profiles(k);
    for (std::size_t c = 0; c < k; ++c) profiles[c].cluster_index = c;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        ClusterProfile& p = profiles[assignments[i]];
        ++p.size;
        ++p.histogram[bucket(scored[i].resolved_severity)];
    }
    for (ClusterProfile& p : profiles)
        for (const auto& [b, count] : p.histogram)
            p.fractions[b] = static_cast<double>(count) / static_cast<double>(p.size);
    return profiles;
}

std::vector<ClusterProfile> cluster_profiles(const std::vector<ScoredTicket>& scored,
                                             const kmeans::Clustering& clustering) {
    return cluster_profiles(scored, clustering.assignments, clustering.centroids.size());
}

std::map<int, std::vector<std::string>> top_terms_per_bucket(
    const textproc::TfidfMatrix& matrix, const std::vector<ScoredTicket>& scored,
    std::size_t top_n, KeywordStat stat) {
    if (matrix.weights.rows() != scored.size())
        throw DimensionError("top_terms_per_bucket: matrix rows/tickets mismatch");

    const std::size_t n_terms = matrix.vocabulary.terms.size();
    std::map<int, std::vector<double>> aggregate;  // bucket -> per-term statistic
    std::map<int, std::size_t> bucket_sizes;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        const int b = bucket(scored[i].resolved_severity);
        auto [it, inserted] = aggregate.try_emplace(b, std::vector<double>(n_terms, 0.0));
        ++bucket_sizes[b];
        auto& acc = it->second;
        for (std::size_t j = 0; j < n_terms; ++j) {
            const double w = matrix.weights(i, j);
            if (stat == KeywordStat::Max)
                acc[j] = std::max(acc[j], w);
            else
                acc[j] += w;
        }
    }

    std::map<int, std::vector<std::string>> top;
    for (auto& [b, acc] : aggregate) {
        if (stat == KeywordStat::Mean) {
            const double inv = 1.0 / static_cast<double>(bucket_sizes[b]);
            for (double& v : acc) v *= inv;
        }
        // Terms with a positive statistic only, ranked descending, ties
        // broken lexicographically.
        std::vector<std::size_t> order;
        for (std::size_t j = 0; j < n_terms; ++j)
            if (acc[j] > 0.0) order.push_back(j);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (acc[x] != acc[y]) return acc[x] > acc[y];
            return matrix.vocabulary.terms[x] < matrix.vocabulary.terms[y];
        });
        if (order.size() > top_n) order.resize(top_n);
        std::vector<std::string> terms;
        terms.reserve(order.size());
        for (std::size_t j : order) terms.push_back(matrix.vocabulary.terms[j]);
        top.emplace(b, std::move(terms));
    }
    return top;
}

KeywordGroups keyword_groups(const std::map<int, std::vector<std::string>>& per_bucket,
                             const std::set<int>& group_a, const std::set<int>& group_b) {
    for (int b : group_a)
        if (group_b.count(b))
            throw ConfigError("keyword_groups: bucket " + std::to_string(b) +
                              " appears in both groups");

    auto union_of = [&](const std::set<int>& buckets) {
        std::set<std::string> terms;
        for (int b : buckets)
            if (auto it = per_bucket.find(b); it != per_bucket.end())
                terms.insert(it->second.begin(), it->second.end());
        return terms;
    };

    const std::set<std::string> union_a = union_of(group_a);
    const std::set<std::string> union_b = union_of(group_b);

    KeywordGroups groups;
    groups.per_bucket_top = per_bucket;
    groups.group_a_buckets = group_a;
    groups.group_b_buckets = group_b;
    // Shared terms are eliminated from both sides; sets stay sorted.
    std::set_difference(union_a.begin(), union_a.end(), union_b.begin(), union_b.end(),
                        std::back_inserter(groups.unique_a));
    std::set_difference(union_b.begin(), union_b.end(), union_a.begin(), union_a.end(),
                        std::back_inserter(groups.unique_b));
    return groups;
}

std::vector<std::pair<std::string, std::size_t>> vendor_counts(
    const std::vector<Ticket>& tickets) {
    std::map<std::string, std::size_t> counts;
    for (const Ticket& t : tickets)
        ++counts[t.vendor.value_or("(unknown)")];

    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace vulncluster::analysis
