// Command-line front end: `run` executes the whole pipeline, while `tfidf`,
// `pca`, `cluster`, and `report` execute one stage each, reading the previous
// stage's dump from --from and writing their own into --out.
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vulncluster/analysis.hpp"
#include "vulncluster/errors.hpp"
#include "vulncluster/ingest.hpp"
#include "vulncluster/kmeans.hpp"
#include "vulncluster/matrix.hpp"
#include "vulncluster/pca.hpp"
#include "vulncluster/pipeline.hpp"
#include "vulncluster/textproc.hpp"
#include "vulncluster/ticket.hpp"
#include "vulncluster/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vulncluster;

namespace {

const std::map<std::string, ingest::TicketFormat> kFormatNames{
    {"per-ticket", ingest::TicketFormat::JsonPerTicket},
    {"array", ingest::TicketFormat::JsonArray}};
const std::map<std::string, pipeline::Labeling> kLabelingNames{
    {"rvss", pipeline::Labeling::Rvss}, {"paper", pipeline::Labeling::Paper}};
const std::map<std::string, analysis::KeywordStat> kStatNames{
    {"sum", analysis::KeywordStat::Sum},
    {"mean", analysis::KeywordStat::Mean},
    {"max", analysis::KeywordStat::Max}};

std::set<int> to_bucket_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Parsed form of a matrix CSV dump: header "doc_id,<col>..." then one row per
// document.
struct MatrixCsv {
    std::vector<std::string> columns;
    std::vector<std::string> doc_ids;
    Matrix values;
};

MatrixCsv read_matrix_csv(const fs::path& path) {
    const auto rows = util::csv_parse(util::read_text_file(path));
    if (rows.empty() || rows.front().empty() || rows.front().front() != "doc_id")
        throw ParseError(path.string() + ": expected a doc_id-headed CSV");
    MatrixCsv out;
    out.columns.assign(rows.front().begin() + 1, rows.front().end());
    out.values = Matrix(rows.size() - 1, out.columns.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw ParseError(path.string() + ": row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " fields, header has " +
                             std::to_string(rows.front().size()));
        out.doc_ids.push_back(rows[i][0]);
        for (std::size_t j = 1; j < rows[i].size(); ++j) {
            try {
                out.values(i - 1, j - 1) = std::stod(rows[i][j]);
            } catch (const std::exception&) {
                throw ParseError(path.string() + ": row " + std::to_string(i) +
                                 ": not a number: " + rows[i][j]);
            }
        }
    }
    return out;
}

json read_json_file(const fs::path& path) {
    json parsed = json::parse(util::read_text_file(path), nullptr, false);
    if (parsed.is_discarded()) throw ParseError(path.string() + ": invalid JSON");
    return parsed;
}

void write_json_file(const fs::path& path, const json& value) {
    util::write_text_file(path, value.dump(2) + "\n");
}

struct TfidfOptions {
    fs::path input;
    ingest::TicketFormat format = ingest::TicketFormat::JsonPerTicket;
    std::size_t min_df = 5;
    fs::path out;
};

// Ingest + resolve + vectorize. Dumps tfidf.csv (the weight matrix),
// vocabulary.json, and corpus.json (per-row ticket metadata plus everything
// the report stage needs that the matrix alone cannot supply).
void run_tfidf(const TfidfOptions& opt) {
    fs::create_directories(opt.out);
    const std::string input_hash = util::hash_input(opt.input);
    auto loaded = ingest::load_tickets(opt.input, opt.format);
    auto resolved = ingest::resolve_scored(loaded.tickets);

    std::vector<textproc::TokenizedDoc> docs;
    docs.reserve(resolved.scored.size());
    for (const auto& st : resolved.scored)
        docs.push_back({st.ticket.id, textproc::tokenize(st.ticket.description)});
    auto tfidf = textproc::tfidf_matrix(docs, opt.min_df);

    std::vector<ScoredTicket> vectorized;
    for (std::size_t i = 0; i < docs.size(); ++i)
        if (!docs[i].tokens.empty()) vectorized.push_back(resolved.scored[i]);

    util::write_text_file(opt.out / "tfidf.csv", textproc::to_csv(tfidf.matrix));

    json vocab;
    vocab["n_docs"] = tfidf.matrix.vocabulary.n_docs;
    vocab["terms"] = tfidf.matrix.vocabulary.terms;
    vocab["doc_freq"] = tfidf.matrix.vocabulary.doc_freq;
    write_json_file(opt.out / "vocabulary.json", vocab);

    json corpus;
    corpus["input"] = opt.input.string();
    corpus["format"] = opt.format == ingest::TicketFormat::JsonPerTicket ? "per-ticket" : "array";
    corpus["min_df"] = opt.min_df;
    corpus["input_hash"] = input_hash;
    corpus["counts"] = {{"loaded", loaded.tickets.size()},
                        {"scored", resolved.scored.size()},
                        {"excluded", resolved.excluded.size()},
                        {"vectorized", vectorized.size()}};
    auto& rows = corpus["tickets"] = json::array();
    for (const auto& st : vectorized) {
        json t;
        t["id"] = st.ticket.id;
        t["severity"] = st.resolved_severity;
        t["source"] =
            st.severity_source == SeveritySource::ExplicitScore ? "explicit" : "computed";
        if (st.ticket.vendor) t["vendor"] = *st.ticket.vendor;
        rows.push_back(std::move(t));
    }
    auto& excl = corpus["excluded"] = json::array();
    for (const auto& e : resolved.excluded) excl.push_back({{"id", e.id}, {"reason", e.reason}});
    auto& diags = corpus["diagnostics"] = json::array();
    for (const auto& d : loaded.diagnostics) {
        json entry = {{"path", d.path}, {"reason", d.reason}};
        if (d.record_index) entry["record_index"] = *d.record_index;
        diags.push_back(std::move(entry));
    }
    auto& vendors = corpus["vendor_counts"] = json::array();
    for (const auto& [vendor, count] : analysis::vendor_counts(loaded.tickets))
        vendors.push_back({{"vendor", vendor}, {"count", count}});
    write_json_file(opt.out / "corpus.json", corpus);

    std::cout << "tfidf: " << tfidf.matrix.weights.rows() << " x "
              << tfidf.matrix.weights.cols() << " matrix from " << loaded.tickets.size()
              << " tickets (" << resolved.excluded.size() << " excluded, "
              << resolved.scored.size() - vectorized.size() << " empty)\n";
}

struct PcaOptions {
    fs::path from;
    std::size_t pca_k = 2;
    fs::path out;
};

void run_pca(const PcaOptions& opt) {
    fs::create_directories(opt.out);
    auto tfidf = read_matrix_csv(opt.from / "tfidf.csv");
    auto model = pca::fit(tfidf.values, opt.pca_k);
    auto projection = pca::project(model, tfidf.values, tfidf.doc_ids);

    util::write_text_file(opt.out / "pca_model.json", pca::to_json(model));

    std::string csv = "doc_id";
    for (std::size_t j = 0; j < model.k; ++j) csv += ",pc" + std::to_string(j + 1);
    csv += '\n';
    for (std::size_t i = 0; i < projection.coords.rows(); ++i) {
        csv += util::csv_escape(projection.doc_ids[i]);
        for (std::size_t j = 0; j < projection.coords.cols(); ++j) {
            csv += ',';
            csv += util::format_g12(projection.coords(i, j));
        }
        csv += '\n';
    }
    util::write_text_file(opt.out / "projection.csv", csv);

    std::cout << "pca: projected to " << model.k << " components, eigenvalues";
    for (double ev : model.eigenvalues) std::cout << ' ' << util::format_g12(ev);
    std::cout << '\n';
}

struct ClusterOptions {
    fs::path from;
    std::size_t kmeans_k = 2;
    std::vector<std::uint64_t> seeds = {0};
    std::size_t max_iter = 300;
    bool trace = false;
    fs::path out;
};

void run_cluster(const ClusterOptions& opt) {
    fs::create_directories(opt.out);
    auto projection_csv = read_matrix_csv(opt.from / "projection.csv");
    std::vector<kmeans::Point> points;
    points.reserve(projection_csv.values.rows());
    for (std::size_t i = 0; i < projection_csv.values.rows(); ++i)
        points.push_back(projection_csv.values.row(i));

    auto best = kmeans::best_of(points, opt.kmeans_k, opt.seeds, opt.max_iter);
    const auto& clustering = best.clustering;

    std::string assignments = "doc_id,cluster\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        assignments += util::csv_escape(projection_csv.doc_ids[i]);
        assignments += ',';
        assignments += std::to_string(clustering.assignments[i]);
        assignments += '\n';
    }
    util::write_text_file(opt.out / "assignments.csv", assignments);

    json dump;
    dump["kmeans_k"] = opt.kmeans_k;
    dump["seeds"] = opt.seeds;
    dump["max_iter"] = opt.max_iter;
    dump["chosen_seed"] = best.chosen_seed;
    auto& inertias = dump["seed_inertias"] = json::array();
    for (const auto& [seed, inertia] : best.seed_inertias)
        inertias.push_back({{"seed", seed}, {"inertia", inertia}});
    dump["inertia"] = clustering.inertia;
    dump["iterations"] = clustering.iterations;
    dump["converged"] = clustering.converged;
    dump["centroids"] = clustering.centroids;
    write_json_file(opt.out / "clustering.json", dump);

    pca::Projection projection{projection_csv.doc_ids, projection_csv.values};
    if (projection.coords.cols() == 2) {
        util::write_text_file(opt.out / "scatter.csv",
                              pipeline::export_scatter(projection, clustering.assignments));
        util::write_text_file(
            opt.out / "scatter.svg",
            pipeline::export_scatter_svg(projection, clustering.assignments, opt.kmeans_k));
    }
    if (opt.trace)
        util::write_text_file(opt.out / "trace.csv", pipeline::trace_csv(clustering));

    std::cout << "cluster: k=" << opt.kmeans_k << " seed=" << best.chosen_seed
              << " inertia=" << util::format_g12(clustering.inertia) << " iterations="
              << clustering.iterations << (clustering.converged ? "" : " (iteration cap)")
              << '\n';
}

struct ReportOptions {
    fs::path from;
    std::size_t top_n = 15;
    std::vector<int> group_a = {1, 2, 3, 4, 5, 6, 7};
    std::vector<int> group_b = {8, 9, 10};
    pipeline::Labeling labeling = pipeline::Labeling::Rvss;
    analysis::KeywordStat stat = analysis::KeywordStat::Sum;
    std::vector<std::string> cluster_labels;
    fs::path out;
};

// Rebuilds a RunResult from the stage dumps so report.json matches what a
// single `run` with the same parameters would have written.
void run_report(const ReportOptions& opt) {
    fs::create_directories(opt.out);
    const json corpus = read_json_file(opt.from / "corpus.json");
    const json clustering_dump = read_json_file(opt.from / "clustering.json");
    const auto model = pca::model_from_json(util::read_text_file(opt.from / "pca_model.json"));
    auto tfidf_csv = read_matrix_csv(opt.from / "tfidf.csv");
    const auto assignment_rows = util::csv_parse(util::read_text_file(opt.from / "assignments.csv"));

    pipeline::PipelineConfig config;
    config.input_path = corpus.at("input").get<std::string>();
    config.format = kFormatNames.at(corpus.at("format").get<std::string>());
    config.min_df = corpus.at("min_df").get<std::size_t>();
    config.pca_k = model.k;
    config.kmeans_k = clustering_dump.at("kmeans_k").get<std::size_t>();
    config.seeds = clustering_dump.at("seeds").get<std::vector<std::uint64_t>>();
    config.max_iter = clustering_dump.at("max_iter").get<std::size_t>();
    config.top_n = opt.top_n;
    config.group_a = to_bucket_set(opt.group_a);
    config.group_b = to_bucket_set(opt.group_b);
    config.labeling = opt.labeling;
    config.keyword_stat = opt.stat;
    config.output_dir = opt.out;
    pipeline::validate(config);

    pipeline::RunResult result;
    result.manifest.input_hash = corpus.at("input_hash").get<std::string>();
    result.manifest.chosen_seed = clustering_dump.at("chosen_seed").get<std::uint64_t>();

    for (const auto& t : corpus.at("tickets")) {
        ScoredTicket st;
        st.ticket.id = t.at("id").get<std::string>();
        if (t.contains("vendor")) st.ticket.vendor = t.at("vendor").get<std::string>();
        st.resolved_severity = t.at("severity").get<double>();
        st.severity_source = t.at("source").get<std::string>() == "explicit"
                                 ? SeveritySource::ExplicitScore
                                 : SeveritySource::ComputedFromVector;
        result.vectorized_tickets.push_back(std::move(st));
    }
    if (result.vectorized_tickets.size() != tfidf_csv.values.rows())
        throw CorpusError("corpus.json and tfidf.csv disagree on document count");

    result.matrix.doc_ids = tfidf_csv.doc_ids;
    result.matrix.vocabulary.terms = tfidf_csv.columns;
    result.matrix.weights = std::move(tfidf_csv.values);

    std::vector<std::size_t> assignments;
    for (std::size_t i = 1; i < assignment_rows.size(); ++i)
        assignments.push_back(std::stoull(assignment_rows[i].at(1)));

    result.profiles =
        analysis::cluster_profiles(result.vectorized_tickets, assignments, config.kmeans_k);
    for (std::size_t i = 0; i < opt.cluster_labels.size() && i < result.profiles.size(); ++i)
        if (!opt.cluster_labels[i].empty()) result.profiles[i].label = opt.cluster_labels[i];
    auto per_bucket = analysis::top_terms_per_bucket(result.matrix, result.vectorized_tickets,
                                                     config.top_n, config.keyword_stat);
    result.keywords = analysis::keyword_groups(per_bucket, config.group_a, config.group_b);
    for (const auto& v : corpus.at("vendor_counts"))
        result.vendors.emplace_back(v.at("vendor").get<std::string>(),
                                    v.at("count").get<std::size_t>());

    util::write_text_file(opt.out / "report.json", pipeline::report_json(result, config));
    std::cout << "report: labeling=" << (opt.labeling == pipeline::Labeling::Rvss ? "rvss" : "paper")
              << ", " << result.profiles.size() << " clusters\n";
}

void run_full(const pipeline::PipelineConfig& config) {
    auto result = pipeline::run(config);
    const auto& m = result.manifest;
    std::cout << "loaded " << m.loaded << " tickets (" << m.excluded << " excluded, "
              << m.scored - m.vectorized << " empty after tokenization)\n";
    std::cout << "matrix " << m.matrix_rows << " x " << m.matrix_cols << ", eigenvalues";
    for (double ev : m.eigenvalues) std::cout << ' ' << util::format_g12(ev);
    std::cout << '\n';
    std::cout << "kmeans k=" << config.kmeans_k << " seed=" << m.chosen_seed
              << " inertia=" << util::format_g12(result.clustering.inertia) << '\n';
    for (const auto& p : result.profiles) {
        std::cout << "cluster " << p.cluster_index;
        if (p.label) std::cout << " (" << *p.label << ")";
        std::cout << ": " << p.size << " tickets\n";
    }
    std::cout << "labeling: "
              << (config.labeling == pipeline::Labeling::Rvss
                      ? "rvss (high-score buckets are severe)"
                      : "paper (low-score buckets are severe)")
              << '\n';
    std::cout << "outputs in " << config.output_dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vulnerability-ticket clustering pipeline"};
    app.require_subcommand(1);
    // Config handling lives on the root app; CLI11 reads the file only there.
    // Sections [run], [tfidf], [pca], [cluster], [report] mirror each
    // subcommand's flags, and fallthrough lets --config follow the subcommand
    // name. Values given on the command line take precedence over the file.
    app.set_config("--config", "",
                   "TOML-style file; [run] etc. sections mirror the subcommand flags");

    pipeline::PipelineConfig run_config;
    std::vector<int> run_group_a = {1, 2, 3, 4, 5, 6, 7};
    std::vector<int> run_group_b = {8, 9, 10};

    auto* run_cmd = app.add_subcommand("run", "Run the full pipeline");
    run_cmd->fallthrough();
    run_cmd->add_option("--input", run_config.input_path, "Ticket file or directory")->required();
    run_cmd->add_option("--format", run_config.format, "Input layout")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
    run_cmd->add_option("--min-df", run_config.min_df, "Minimum document frequency");
    run_cmd->add_option("--pca-k", run_config.pca_k, "Number of principal components");
    run_cmd->add_option("--kmeans-k", run_config.kmeans_k, "Number of clusters");
    run_cmd->add_option("--seeds", run_config.seeds, "Candidate RNG seeds (best inertia wins)")
        ->delimiter(',')
        ->envname("VULNCLUSTER_SEED");
    run_cmd->add_option("--top-n", run_config.top_n, "Keywords per severity bucket");
    run_cmd->add_option("--group-a", run_group_a, "Buckets of the first keyword group")
        ->delimiter(',');
    run_cmd->add_option("--group-b", run_group_b, "Buckets of the second keyword group")
        ->delimiter(',');
    run_cmd->add_option("--labeling", run_config.labeling, "Which group is called severe")
        ->transform(CLI::CheckedTransformer(kLabelingNames, CLI::ignore_case));
    run_cmd->add_option("--keyword-stat", run_config.keyword_stat, "Per-bucket ranking statistic")
        ->transform(CLI::CheckedTransformer(kStatNames, CLI::ignore_case));
    run_cmd->add_option("--cluster-label", run_config.cluster_labels,
                        "Label for cluster 0, 1, ... (repeatable)");
    run_cmd->add_option("--max-iter", run_config.max_iter, "Iteration cap per k-means run");
    run_cmd->add_flag("--trace", run_config.write_trace, "Also write trace.csv");
    run_cmd->add_option("--out", run_config.output_dir, "Output directory")->required();

    TfidfOptions tfidf_opt;
    auto* tfidf_cmd = app.add_subcommand("tfidf", "Ingest tickets and build the TF-IDF matrix");
    tfidf_cmd->fallthrough();
    tfidf_cmd->add_option("--input", tfidf_opt.input, "Ticket file or directory")->required();
    tfidf_cmd->add_option("--format", tfidf_opt.format, "Input layout")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
    tfidf_cmd->add_option("--min-df", tfidf_opt.min_df, "Minimum document frequency");
    tfidf_cmd->add_option("--out", tfidf_opt.out, "Output directory")->required();

    PcaOptions pca_opt;
    auto* pca_cmd = app.add_subcommand("pca", "Fit PCA on a tfidf dump and project");
    pca_cmd->fallthrough();
    pca_cmd->add_option("--from", pca_opt.from, "Directory holding tfidf.csv")->required();
    pca_cmd->add_option("--pca-k", pca_opt.pca_k, "Number of principal components");
    pca_cmd->add_option("--out", pca_opt.out, "Output directory")->required();

    ClusterOptions cluster_opt;
    auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a projection dump");
    cluster_cmd->fallthrough();
    cluster_cmd->add_option("--from", cluster_opt.from, "Directory holding projection.csv")
        ->required();
    cluster_cmd->add_option("--kmeans-k", cluster_opt.kmeans_k, "Number of clusters");
    cluster_cmd->add_option("--seeds", cluster_opt.seeds, "Candidate RNG seeds")
        ->delimiter(',')
        ->envname("VULNCLUSTER_SEED");
    cluster_cmd->add_option("--max-iter", cluster_opt.max_iter, "Iteration cap per k-means run");
    cluster_cmd->add_flag("--trace", cluster_opt.trace, "Also write trace.csv");
    cluster_cmd->add_option("--out", cluster_opt.out, "Output directory")->required();

    ReportOptions report_opt;
    auto* report_cmd = app.add_subcommand("report", "Build report.json from stage dumps");
    report_cmd->fallthrough();
    report_cmd->add_option("--from", report_opt.from, "Directory holding the stage dumps")
        ->required();
    report_cmd->add_option("--top-n", report_opt.top_n, "Keywords per severity bucket");
    report_cmd->add_option("--group-a", report_opt.group_a, "Buckets of the first keyword group")
        ->delimiter(',');
    report_cmd->add_option("--group-b", report_opt.group_b, "Buckets of the second keyword group")
        ->delimiter(',');
    report_cmd->add_option("--labeling", report_opt.labeling, "Which group is called severe")
        ->transform(CLI::CheckedTransformer(kLabelingNames, CLI::ignore_case));
    report_cmd->add_option("--keyword-stat", report_opt.stat, "Per-bucket ranking statistic")
        ->transform(CLI::CheckedTransformer(kStatNames, CLI::ignore_case));
    report_cmd->add_option("--cluster-label", report_opt.cluster_labels,
                           "Label for cluster 0, 1, ... (repeatable)");
    report_cmd->add_option("--out", report_opt.out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            run_config.group_a = to_bucket_set(run_group_a);
            run_config.group_b = to_bucket_set(run_group_b);
            run_full(run_config);
        } else if (tfidf_cmd->parsed()) {
            run_tfidf(tfidf_opt);
        } else if (pca_cmd->parsed()) {
            run_pca(pca_opt);
        } else if (cluster_cmd->parsed()) {
            run_cluster(cluster_opt);
        } else if (report_cmd->parsed()) {
            run_report(report_opt);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
