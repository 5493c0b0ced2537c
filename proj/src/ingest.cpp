#include "vulncluster/ingest.hpp"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"
#include "vulncluster/cvss.hpp"
#include "vulncluster/errors.hpp"
#include "vulncluster/util.hpp"

namespace vulncluster::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<std::string> optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(std::string("field '") + key + "' is not a string");
    std::string s = it->get<std::string>();
    if (s.empty()) return std::nullopt;
    return s;
}

// Accepted schema: id, title, description, vendor, cve, cwe,
// severity.rvss.score, severity.rvss.vector. See docs/data-format.md for
// the mapping from raw RVD exports.
Ticket parse_ticket(const json& obj) {
    if (!obj.is_object()) throw ParseError("record is not a JSON object");

    Ticket t;
    auto id = obj.find("id");
    if (id == obj.end() || !id->is_string() || id->get<std::string>().empty())
        throw ParseError("record lacks a nonempty string 'id'");
    t.id = id->get<std::string>();

    if (auto v = optional_string(obj, "title")) t.title = *v;
    if (auto v = obj.find("description"); v != obj.end() && v->is_string())
        t.description = v->get<std::string>();
    t.vendor = optional_string(obj, "vendor");
    t.cve = optional_string(obj, "cve");
    t.cwe = optional_string(obj, "cwe");

    if (auto sev = obj.find("severity"); sev != obj.end() && sev->is_object()) {
        if (auto rvss = sev->find("rvss"); rvss != sev->end() && rvss->is_object()) {
            if (auto score = rvss->find("score"); score != rvss->end() && !score->is_null()) {
                if (!score->is_number())
                    throw ParseError("severity.rvss.score is not a number");
                const double s = score->get<double>();
                if (s < 0.0 || s > 10.0)
                    throw ParseError("severity.rvss.score outside [0, 10]: " +
                                     util::format_g12(s));
                t.severity_score = s;
            }
            t.severity_vector = optional_string(*rvss, "vector");
        }
    }
    return t;
}

struct Location {
    std::string path;
    std::optional<std::size_t> index;

    std::string describe() const {
        if (index) return path + " (record " + std::to_string(*index) + ")";
        return path;
    }
};

void ingest_record(const json& obj, const Location& loc, LoadResult& result,
                   std::unordered_map<std::string, Location>& seen_ids) {
    Ticket t;
    try {
        t = parse_ticket(obj);
    } catch (const ParseError& e) {
        result.diagnostics.push_back({loc.path, loc.index, e.what()});
        return;
    }
    if (auto it = seen_ids.find(t.id); it != seen_ids.end())
        throw CorpusError("duplicate ticket id '" + t.id + "' at " + it->second.describe() +
                          " and " + loc.describe());
    seen_ids.emplace(t.id, loc);
    result.tickets.push_back(std::move(t));
}

void ingest_file(const fs::path& file, TicketFormat format, LoadResult& result,
                 std::unordered_map<std::string, Location>& seen_ids) {
    const std::string path_str = file.string();
    json doc;
    try {
        doc = json::parse(util::read_text_file(file));
    } catch (const json::parse_error& e) {
        result.diagnostics.push_back({path_str, std::nullopt, e.what()});
        return;
    }

    if (format == TicketFormat::JsonPerTicket) {
        ingest_record(doc, {path_str, std::nullopt}, result, seen_ids);
    } else {
        if (!doc.is_array()) {
            result.diagnostics.push_back({path_str, std::nullopt, "top-level value is not an array"});
            return;
        }
        for (std::size_t i = 0; i < doc.size(); ++i)
            ingest_record(doc[i], {path_str, i}, result, seen_ids);
    }
}

}  // namespace

LoadResult load_tickets(const fs::path& source, TicketFormat format) {
    if (!fs::exists(source)) throw IoError("input path does not exist: " + source.string());

    std::vector<fs::path> files;
    if (fs::is_directory(source)) {
        for (const auto& entry : fs::recursive_directory_iterator(source))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        // Lexicographic path order, so results do not depend on how the
        // filesystem enumerates entries.
        std::sort(files.begin(), files.end(),
                  [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });
    } else {
        files.push_back(source);
    }

    LoadResult result;
    std::unordered_map<std::string, Location> seen_ids;
    for (const auto& file : files) ingest_file(file, format, result, seen_ids);
    return result;
}

ResolveResult resolve_scored(const std::vector<Ticket>& tickets) {
    ResolveResult result;
    for (const Ticket& t : tickets) {
        if (t.severity_score) {
            if (*t.severity_score < 0.0 || *t.severity_score > 10.0) {
                result.excluded.push_back({t.id, "severity score outside [0, 10]"});
                continue;
            }
            result.scored.push_back({t, *t.severity_score, SeveritySource::ExplicitScore});
        } else if (t.severity_vector) {
            try {
                const double score = cvss::base_score(cvss::parse_metric_vector(*t.severity_vector));
                result.scored.push_back({t, score, SeveritySource::ComputedFromVector});
            } catch (const Error& e) {
                result.excluded.push_back({t.id, std::string("unscorable vector: ") + e.what()});
            }
        } else {
            result.excluded.push_back({t.id, "no severity score or vector"});
        }
    }
    return result;
}

}  // namespace vulncluster::ingest
