#include "vulncluster/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "vulncluster/errors.hpp"
#include "vulncluster/util.hpp"

namespace vulncluster::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* labeling_name(Labeling l) { return l == Labeling::Rvss ? "rvss" : "paper"; }

const char* stat_name(analysis::KeywordStat s) {
    switch (s) {
        case analysis::KeywordStat::Sum: return "sum";
        case analysis::KeywordStat::Mean: return "mean";
        case analysis::KeywordStat::Max: return "max";
    }
    return "sum";
}

const char* format_name(ingest::TicketFormat f) {
    return f == ingest::TicketFormat::JsonPerTicket ? "per-ticket" : "array";
}

json parameters_json(const PipelineConfig& config) {
    json p;
    p["input"] = config.input_path.string();
    p["format"] = format_name(config.format);
    p["min_df"] = config.min_df;
    p["pca_k"] = config.pca_k;
    p["kmeans_k"] = config.kmeans_k;
    p["seeds"] = config.seeds;
    p["top_n"] = config.top_n;
    p["group_a"] = config.group_a;
    p["group_b"] = config.group_b;
    p["labeling"] = labeling_name(config.labeling);
    p["keyword_stat"] = stat_name(config.keyword_stat);
    p["max_iter"] = config.max_iter;
    return p;
}

json group_json(const std::set<int>& buckets, const std::vector<std::string>& keywords) {
    json g;
    g["buckets"] = buckets;
    g["keywords"] = keywords;
    return g;
}

json manifest_json(const RunManifest& manifest, const PipelineConfig& config,
                   const std::vector<ingest::Diagnostic>& diagnostics,
                   const std::vector<ingest::ExcludedTicket>& excluded,
                   const std::string& error) {
    json m;
    m["config"] = parameters_json(config);
    m["input_hash"] = manifest.input_hash;
    m["counts"] = {{"loaded", manifest.loaded},
                   {"scored", manifest.scored},
                   {"excluded", manifest.excluded},
                   {"vectorized", manifest.vectorized}};
    m["matrix_shape"] = {manifest.matrix_rows, manifest.matrix_cols};
    m["eigenvalues"] = manifest.eigenvalues;
    auto& inertias = m["seed_inertias"] = json::array();
    for (const auto& [seed, inertia] : manifest.seed_inertias)
        inertias.push_back({{"seed", seed}, {"inertia", inertia}});
    m["chosen_seed"] = manifest.chosen_seed;
    m["timestamp"] = manifest.timestamp;
    m["status"] = manifest.status;
    if (!error.empty()) m["error"] = error;
    auto& diags = m["diagnostics"] = json::array();
    for (const auto& d : diagnostics) {
        json entry = {{"path", d.path}, {"reason", d.reason}};
        if (d.record_index) entry["record_index"] = *d.record_index;
        diags.push_back(std::move(entry));
    }
    auto& excl = m["excluded_tickets"] = json::array();
    for (const auto& e : excluded) excl.push_back({{"id", e.id}, {"reason", e.reason}});
    return m;
}

void write_failed_manifest(const PipelineConfig& config, RunManifest manifest,
                           const std::vector<ingest::Diagnostic>& diagnostics,
                           const std::vector<ingest::ExcludedTicket>& excluded,
                           const std::string& error) {
    manifest.status = "failed";
    manifest.timestamp = util::utc_timestamp();
    try {
        fs::create_directories(config.output_dir);
        util::write_text_file(config.output_dir / "manifest.json",
                              manifest_json(manifest, config, diagnostics, excluded, error).dump(2) +
                                  "\n");
    } catch (const Error&) {
        // Losing the failure manifest must not mask the original error.
    }
}

}  // namespace

void validate(const PipelineConfig& config) {
    if (config.input_path.empty()) throw ConfigError("input path is required");
    if (config.min_df < 1) throw ConfigError("min_df must be >= 1");
    if (config.pca_k < 1) throw ConfigError("pca_k must be >= 1");
    if (config.kmeans_k < 1) throw ConfigError("kmeans_k must be >= 1");
    if (config.seeds.empty()) throw ConfigError("at least one seed is required");
    if (config.top_n < 1) throw ConfigError("top_n must be >= 1");
    if (config.max_iter < 1) throw ConfigError("max_iter must be >= 1");
    for (const auto& group : {config.group_a, config.group_b})
        for (int b : group)
            if (b < 0 || b > 10)
                throw ConfigError("bucket " + std::to_string(b) + " outside [0, 10]");
    for (int b : config.group_a)
        if (config.group_b.count(b))
            throw ConfigError("bucket " + std::to_string(b) + " appears in both groups");
}

std::string export_scatter(const pca::Projection& projection,
                           const std::vector<std::size_t>& assignments) {
    if (projection.coords.cols() != 2)
        throw DimensionError("scatter export needs a 2-D projection; rerun with pca_k=2");
    if (projection.coords.rows() != assignments.size())
        throw DimensionError("scatter export: projection/assignments length mismatch");

    std::string out = "doc_id,pc1,pc2,cluster\n";
    for (std::size_t i = 0; i < projection.coords.rows(); ++i) {
        out += util::csv_escape(projection.doc_ids[i]);
        out += ',';
        out += util::format_g12(projection.coords(i, 0));
        out += ',';
        out += util::format_g12(projection.coords(i, 1));
        out += ',';
        out += std::to_string(assignments[i]);
        out += '\n';
    }
    return out;
}

std::string export_scatter_svg(const pca::Projection& projection,
                               const std::vector<std::size_t>& assignments, std::size_t k) {
    if (projection.coords.cols() != 2)
        throw DimensionError("scatter export needs a 2-D projection; rerun with pca_k=2");

    static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                     "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 480.0;
    constexpr double kMargin = 48.0;

    const std::size_t n = projection.coords.rows();
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    if (n > 0) {
        min_x = max_x = projection.coords(0, 0);
        min_y = max_y = projection.coords(0, 1);
        for (std::size_t i = 1; i < n; ++i) {
            min_x = std::min(min_x, projection.coords(i, 0));
            max_x = std::max(max_x, projection.coords(i, 0));
            min_y = std::min(min_y, projection.coords(i, 1));
            max_y = std::max(max_y, projection.coords(i, 1));
        }
    }
    // 5% padding on each side; degenerate ranges get a fixed half-unit.
    auto pad = [](double& lo, double& hi) {
        const double range = hi - lo;
        if (range == 0.0) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            lo -= 0.05 * range;
            hi += 0.05 * range;
        }
    };
    pad(min_x, max_x);
    pad(min_y, max_y);

    auto sx = [&](double x) {
        return kMargin + (x - min_x) / (max_x - min_x) * (kWidth - 2.0 * kMargin);
    };
    auto sy = [&](double y) {
        return kHeight - kMargin - (y - min_y) / (max_y - min_y) * (kHeight - 2.0 * kMargin);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "  <rect x=\"" + util::format_g12(kMargin) + "\" y=\"" + util::format_g12(kMargin) +
           "\" width=\"" + util::format_g12(kWidth - 2 * kMargin) + "\" height=\"" +
           util::format_g12(kHeight - 2 * kMargin) +
           "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        const char* color = kPalette[assignments[i] % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "  <circle cx=\"" + util::format_g12(sx(projection.coords(i, 0))) + "\" cy=\"" +
               util::format_g12(sy(projection.coords(i, 1))) + "\" r=\"4\" fill=\"" + color +
               "\" fill-opacity=\"0.8\"/>\n";
    }
    // Legend: one swatch per cluster.
    for (std::size_t c = 0; c < k; ++c) {
        const double y = kMargin + 16.0 * static_cast<double>(c);
        const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "  <rect x=\"" + util::format_g12(kWidth - kMargin + 8.0) + "\" y=\"" +
               util::format_g12(y) + "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        svg += "  <text x=\"" + util::format_g12(kWidth - kMargin + 22.0) + "\" y=\"" +
               util::format_g12(y + 9.0) + "\" font-size=\"10\" font-family=\"sans-serif\">" +
               std::to_string(c) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string trace_csv(const kmeans::Clustering& clustering) {
    std::string out = "iteration,inertia,points_reassigned\n";
    for (const auto& stat : clustering.trace) {
        out += std::to_string(stat.iteration);
        out += ',';
        out += util::format_g12(stat.inertia);
        out += ',';
        out += std::to_string(stat.reassigned);
        out += '\n';
    }
    return out;
}

std::string report_json(const RunResult& result, const PipelineConfig& config) {
    json report;
    report["labeling"] = labeling_name(config.labeling);

    // Default labeling follows the score semantics (10 most severe): the
    // high-score group is the severe one. "paper" labeling swaps the names.
    const auto& kw = result.keywords;
    if (config.labeling == Labeling::Rvss) {
        report["severe"] = group_json(kw.group_b_buckets, kw.unique_b);
        report["non_severe"] = group_json(kw.group_a_buckets, kw.unique_a);
    } else {
        report["severe"] = group_json(kw.group_a_buckets, kw.unique_a);
        report["non_severe"] = group_json(kw.group_b_buckets, kw.unique_b);
    }

    auto& clusters = report["clusters"] = json::array();
    for (const auto& p : result.profiles) {
        json c;
        c["index"] = p.cluster_index;
        c["size"] = p.size;
        if (p.label) c["label"] = *p.label;
        auto& severity = c["severity"] = json::array();
        for (const auto& [b, count] : p.histogram)
            severity.push_back(
                {{"bucket", b}, {"count", count}, {"fraction", p.fractions.at(b)}});
        clusters.push_back(std::move(c));
    }

    auto& buckets = report["per_bucket_keywords"] = json::array();
    for (const auto& [b, terms] : kw.per_bucket_top)
        buckets.push_back({{"bucket", b}, {"keywords", terms}});

    auto& vendors = report["vendor_counts"] = json::array();
    for (const auto& [vendor, count] : result.vendors)
        vendors.push_back({{"vendor", vendor}, {"count", count}});

    json prov;
    prov["input_hash"] = result.manifest.input_hash;
    prov["parameters"] = parameters_json(config);
    prov["chosen_seed"] = result.manifest.chosen_seed;
    report["provenance"] = std::move(prov);
    return report.dump(2) + "\n";
}

RunResult run(const PipelineConfig& config) {
    validate(config);

    RunResult result;
    try {
        result.manifest.input_hash = util::hash_input(config.input_path);

        // Ingest.
        auto loaded = ingest::load_tickets(config.input_path, config.format);
        result.diagnostics = std::move(loaded.diagnostics);
        result.manifest.loaded = loaded.tickets.size();

        auto resolved = ingest::resolve_scored(loaded.tickets);
        result.excluded = std::move(resolved.excluded);
        result.manifest.scored = resolved.scored.size();
        result.manifest.excluded = result.excluded.size();

        // Vectorize. Zero-token documents drop out here, so the scored list
        // is filtered to stay aligned with the matrix rows.
        std::vector<textproc::TokenizedDoc> docs;
        docs.reserve(resolved.scored.size());
        for (const auto& st : resolved.scored)
            docs.push_back({st.ticket.id, textproc::tokenize(st.ticket.description)});

        auto tfidf = textproc::tfidf_matrix(docs, config.min_df);
        result.matrix = std::move(tfidf.matrix);
        for (std::size_t i = 0; i < docs.size(); ++i)
            if (!docs[i].tokens.empty())
                result.vectorized_tickets.push_back(resolved.scored[i]);
        result.manifest.vectorized = result.vectorized_tickets.size();
        result.manifest.matrix_rows = result.matrix.weights.rows();
        result.manifest.matrix_cols = result.matrix.weights.cols();

        if (result.manifest.vectorized < 2)
            throw NumericError("need at least 2 vectorizable tickets, have " +
                               std::to_string(result.manifest.vectorized));

        // Reduce.
        result.model = pca::fit(result.matrix.weights, config.pca_k);
        result.manifest.eigenvalues = result.model.eigenvalues;
        result.projection =
            pca::project(result.model, result.matrix.weights, result.matrix.doc_ids);

        // Cluster.
        std::vector<kmeans::Point> points;
        points.reserve(result.projection.coords.rows());
        for (std::size_t i = 0; i < result.projection.coords.rows(); ++i)
            points.push_back(result.projection.coords.row(i));
        auto best = kmeans::best_of(points, config.kmeans_k, config.seeds, config.max_iter);
        result.clustering = std::move(best.clustering);
        result.manifest.chosen_seed = best.chosen_seed;
        result.manifest.seed_inertias = std::move(best.seed_inertias);

        // Analyze.
        result.profiles = analysis::cluster_profiles(result.vectorized_tickets, result.clustering);
        for (std::size_t i = 0; i < config.cluster_labels.size() && i < result.profiles.size(); ++i)
            if (!config.cluster_labels[i].empty())
                result.profiles[i].label = config.cluster_labels[i];
        auto per_bucket = analysis::top_terms_per_bucket(result.matrix, result.vectorized_tickets,
                                                         config.top_n, config.keyword_stat);
        result.keywords = analysis::keyword_groups(per_bucket, config.group_a, config.group_b);
        result.vendors = analysis::vendor_counts(loaded.tickets);

        // Write outputs.
        fs::create_directories(config.output_dir);
        util::write_text_file(config.output_dir / "report.json", report_json(result, config));
        if (config.pca_k == 2) {
            util::write_text_file(config.output_dir / "scatter.csv",
                                  export_scatter(result.projection, result.clustering.assignments));
            util::write_text_file(
                config.output_dir / "scatter.svg",
                export_scatter_svg(result.projection, result.clustering.assignments,
                                   config.kmeans_k));
        }
        if (config.write_trace)
            util::write_text_file(config.output_dir / "trace.csv", trace_csv(result.clustering));

        result.manifest.timestamp = util::utc_timestamp();
        result.manifest.status = "ok";
        util::write_text_file(
            config.output_dir / "manifest.json",
            manifest_json(result.manifest, config, result.diagnostics, result.excluded, "").dump(2) +
                "\n");
    } catch (const Error& e) {
        write_failed_manifest(config, result.manifest, result.diagnostics, result.excluded,
                              e.what());
        throw;
    }
    return result;
}

}  // namespace vulncluster::pipeline
