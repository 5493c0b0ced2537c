#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vulncluster/analysis.hpp"
#include "vulncluster/ingest.hpp"
#include "vulncluster/kmeans.hpp"
#include "vulncluster/pca.hpp"
#include "vulncluster/textproc.hpp"

namespace vulncluster::pipeline {

enum class Labeling { Rvss, Paper };

struct PipelineConfig {
    std::filesystem::path input_path;
    ingest::TicketFormat format = ingest::TicketFormat::JsonPerTicket;
    std::size_t min_df = 5;
    std::size_t pca_k = 2;
    std::size_t kmeans_k = 2;
    std::vector<std::uint64_t> seeds = {0};
    std::size_t top_n = 15;
    std::set<int> group_a = {1, 2, 3, 4, 5, 6, 7};
    std::set<int> group_b = {8, 9, 10};
    Labeling labeling = Labeling::Rvss;
    analysis::KeywordStat keyword_stat = analysis::KeywordStat::Sum;
    std::vector<std::string> cluster_labels;  // label i applies to cluster i
    std::filesystem::path output_dir;
    bool write_trace = false;
    std::size_t max_iter = 300;
};

/// Throws ConfigError on invalid parameters (min_df, pca_k, kmeans_k >= 1,
/// nonempty seeds, disjoint bucket groups, bucket values in [0, 10]).
void validate(const PipelineConfig& config);

struct RunManifest {
    std::string input_hash;
    std::size_t loaded = 0;
    std::size_t scored = 0;
    std::size_t excluded = 0;
    std::size_t vectorized = 0;
    std::size_t matrix_rows = 0;
    std::size_t matrix_cols = 0;
    std::vector<double> eigenvalues;
    std::vector<std::pair<std::uint64_t, double>> seed_inertias;
    std::uint64_t chosen_seed = 0;
    std::string timestamp;
    std::string status = "ok";
};

/// Everything a run produces, kept in memory so stages can be inspected and
/// compared against the independent module calls.
struct RunResult {
    RunManifest manifest;
    std::vector<ingest::Diagnostic> diagnostics;
    std::vector<ingest::ExcludedTicket> excluded;
    std::vector<ScoredTicket> vectorized_tickets;  // aligned with matrix rows
    textproc::TfidfMatrix matrix;
    pca::PcaModel model;
    pca::Projection projection;
    kmeans::Clustering clustering;
    std::vector<analysis::ClusterProfile> profiles;
    analysis::KeywordGroups keywords;
    std::vector<std::pair<std::string, std::size_t>> vendors;
};

/// Runs ingest -> tfidf -> pca -> kmeans -> analysis and writes report.json,
/// scatter.csv, scatter.svg, manifest.json (and trace.csv when enabled) to
/// output_dir. Outputs are byte-deterministic for identical input bytes and
/// config, timestamp aside. On a stage error the manifest is written with
/// status "failed" before the error propagates.
RunResult run(const PipelineConfig& config);

/// Report document (profiles, per-bucket keywords, unique keyword groups,
/// active labeling, provenance). Serialized by run() into report.json.
std::string report_json(const RunResult& result, const PipelineConfig& config);

/// CSV with columns doc_id, pc1, pc2, cluster. Requires a 2-D projection.
std::string export_scatter(const pca::Projection& projection,
                           const std::vector<std::size_t>& assignments);

/// One marker per point, one color per cluster, axis ranges padded 5%.
std::string export_scatter_svg(const pca::Projection& projection,
                               const std::vector<std::size_t>& assignments,
                               std::size_t k);

std::string trace_csv(const kmeans::Clustering& clustering);

}  // namespace vulncluster::pipeline
