#include "vulncluster/kmeans.hpp"

#include <limits>
#include <random>
#include <set>

#include "vulncluster/errors.hpp"

namespace vulncluster::kmeans {

namespace {

// Unbiased draw in [0, bound) via rejection; std::mt19937_64 output is fully
// specified by the standard, so selections are identical across platforms.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % bound + 1) % bound;
    std::uint64_t draw;
    do {
        draw = gen();
    } while (draw > limit);
    return draw % bound;
}

double squared_distance(const Point& a, const Point& b) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return sum;
}

void check_dimensions(const std::vector<Point>& points, const std::vector<Point>& centroids) {
    if (centroids.empty()) throw DimensionError("assign: no centroids");
    const std::size_t dim = centroids.front().size();
    for (const Point& c : centroids)
        if (c.size() != dim) throw DimensionError("assign: ragged centroid dimensions");
    for (const Point& p : points)
        if (p.size() != dim) throw DimensionError("assign: point/centroid dimension mismatch");
}

}  // namespace

std::vector<Point> init_centroids(const std::vector<Point>& points, std::size_t k,
                                  std::uint64_t seed) {
    if (k < 1) throw ConfigError("init_centroids: k must be >= 1");

    // Candidates are the distinct point values, in first-occurrence order.
    std::vector<Point> distinct;
    std::set<Point> seen;
    for (const Point& p : points)
        if (seen.insert(p).second) distinct.push_back(p);

    if (distinct.size() < k)
        throw NumericError("init_centroids: " + std::to_string(distinct.size()) +
                           " distinct points, need k = " + std::to_string(k));

    // Partial Fisher-Yates over candidate indices.
    std::mt19937_64 gen(seed);
    std::vector<std::size_t> idx(distinct.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<Point> selected;
    selected.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_below(gen, idx.size() - i);
        std::swap(idx[i], idx[j]);
        selected.push_back(distinct[idx[i]]);
    }
    return selected;
}

std::vector<std::size_t> assign(const std::vector<Point>& points,
                                const std::vector<Point>& centroids) {
    check_dimensions(points, centroids);
    std::vector<std::size_t> assignments(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::size_t best = 0;
        double best_dist = squared_distance(points[i], centroids[0]);
        // Strict < keeps the lowest centroid index on ties.
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double dist = squared_distance(points[i], centroids[c]);
            if (dist < best_dist) {
                best_dist = dist;
                best = c;
            }
        }
        assignments[i] = best;
    }
    return assignments;
}

std::vector<Point> update(const std::vector<Point>& points,
                          const std::vector<std::size_t>& assignments,
                          const std::vector<Point>& previous_centroids) {
    const std::size_t k = previous_centroids.size();
    if (assignments.size() != points.size())
        throw DimensionError("update: assignments/points length mismatch");
    for (std::size_t a : assignments)
        if (a >= k) throw DimensionError("update: cluster index out of range");

    const std::size_t dim = previous_centroids.empty() ? 0 : previous_centroids.front().size();
    std::vector<Point> sums(k, Point(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t d = 0; d < dim; ++d) sums[assignments[i]][d] += points[i][d];
        ++counts[assignments[i]];
    }

    std::vector<Point> centroids(k);
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            centroids[c] = previous_centroids[c];  // empty cluster keeps its centroid
        } else {
            centroids[c] = Point(dim);
            for (std::size_t d = 0; d < dim; ++d)
                centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
    }
    return centroids;
}

double inertia_of(const std::vector<Point>& points,
                  const std::vector<std::size_t>& assignments,
                  const std::vector<Point>& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        total += squared_distance(points[i], centroids[assignments[i]]);
    return total;
}

Clustering fit_from(const std::vector<Point>& points, std::vector<Point> centroids,
                    std::size_t max_iter) {
    if (max_iter < 1) throw ConfigError("fit: max_iter must be >= 1");
    check_dimensions(points, centroids);

    Clustering result;
    result.centroids = std::move(centroids);
    result.assignments.assign(points.size(), std::numeric_limits<std::size_t>::max());

    while (result.iterations < max_iter) {
        ++result.iterations;
        const auto next = assign(points, result.centroids);
        std::size_t changed = 0;
        for (std::size_t i = 0; i < next.size(); ++i)
            if (next[i] != result.assignments[i]) ++changed;
        result.assignments = next;
        if (changed == 0) {
            result.converged = true;
            result.trace.push_back({result.iterations,
                                    inertia_of(points, result.assignments, result.centroids), 0});
            break;
        }
        result.centroids = update(points, result.assignments, result.centroids);
        result.trace.push_back({result.iterations,
                                inertia_of(points, result.assignments, result.centroids), changed});
    }
    result.inertia = inertia_of(points, result.assignments, result.centroids);
    return result;
}

Clustering fit(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
               std::size_t max_iter) {
    return fit_from(points, init_centroids(points, k, seed), max_iter);
}

BestOf best_of(const std::vector<Point>& points, std::size_t k,
               const std::vector<std::uint64_t>& seeds, std::size_t max_iter) {
    if (seeds.empty()) throw ConfigError("best_of: seeds must be nonempty");

    BestOf best;
    bool have_best = false;
    for (std::uint64_t seed : seeds) {
        Clustering c = fit(points, k, seed, max_iter);
        best.seed_inertias.emplace_back(seed, c.inertia);
        // Ties go to the earliest seed.
        if (!have_best || c.inertia < best.clustering.inertia) {
            best.clustering = std::move(c);
            best.chosen_seed = seed;
            have_best = true;
        }
    }
    return best;
}

}  // namespace vulncluster::kmeans
