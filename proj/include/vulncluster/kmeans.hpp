#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace vulncluster::kmeans {

using Point = std::vector<double>;

struct IterationStat {
    std::size_t iteration = 0;
    double inertia = 0.0;
    std::size_t reassigned = 0;
};

struct Clustering {
    std::vector<std::size_t> assignments;  // per-point cluster index in [0, k)
    std::vector<Point> centroids;
    double inertia = 0.0;  // sum of squared point-to-assigned-centroid distances
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<IterationStat> trace;
};

/// Selects k distinct input points uniformly without replacement with a
/// seeded generator (std::mt19937_64, rejection-sampled bounded draws,
/// partial Fisher-Yates; see docs/data-format.md). Same seed, same
/// selection, on every platform. Throws when there are fewer distinct
/// points than k.
std::vector<Point> init_centroids(const std::vector<Point>& points, std::size_t k,
                                  std::uint64_t seed);

/// Maps each point to the centroid of minimal squared Euclidean distance;
/// ties go to the lowest centroid index.
std::vector<std::size_t> assign(const std::vector<Point>& points,
                                const std::vector<Point>& centroids);

/// Arithmetic mean of each non-empty cluster's members. An empty cluster
/// keeps its previous centroid, which is why the previous centroids are the
/// third argument (k == previous.size()).
std::vector<Point> update(const std::vector<Point>& points,
                          const std::vector<std::size_t>& assignments,
                          const std::vector<Point>& previous_centroids);

double inertia_of(const std::vector<Point>& points,
                  const std::vector<std::size_t>& assignments,
                  const std::vector<Point>& centroids);

/// Lloyd iterations from the given centroids until an assignment pass
/// changes no point (converged) or max_iter is reached. Records a per
/// iteration (inertia, points reassigned) trace.
Clustering fit_from(const std::vector<Point>& points, std::vector<Point> centroids,
                    std::size_t max_iter = 300);

/// init_centroids + fit_from.
Clustering fit(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
               std::size_t max_iter = 300);

struct BestOf {
    Clustering clustering;
    std::uint64_t chosen_seed = 0;
    std::vector<std::pair<std::uint64_t, double>> seed_inertias;  // seed order
};

/// Runs fit once per seed and keeps the result of minimal inertia; ties go
/// to the earliest seed.
BestOf best_of(const std::vector<Point>& points, std::size_t k,
               const std::vector<std::uint64_t>& seeds, std::size_t max_iter = 300);

}  // namespace vulncluster::kmeans
