#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vulncluster/ticket.hpp"

namespace vulncluster::ingest {

enum class TicketFormat { JsonPerTicket, JsonArray };

/// Machine-readable note about a record that could not be ingested.
struct Diagnostic {
    std::string path;
    std::optional<std::size_t> record_index;  // set for array entries
    std::string reason;
};

struct LoadResult {
    std::vector<Ticket> tickets;
    std::vector<Diagnostic> diagnostics;
};

/// Loads tickets from a JSON file or a directory of *.json files. Directory
/// entries are processed in lexicographic path order, so results do not
/// depend on filesystem enumeration order. Malformed records land in
/// diagnostics instead of being dropped silently. Throws IoError for an
/// unreadable source and CorpusError for a duplicate id (naming both
/// locations).
LoadResult load_tickets(const std::filesystem::path& source, TicketFormat format);

struct ExcludedTicket {
    std::string id;
    std::string reason;
};

struct ResolveResult {
    std::vector<ScoredTicket> scored;
    std::vector<ExcludedTicket> excluded;
};

/// Resolves a numeric severity per ticket: an explicit score is used
/// verbatim, otherwise the base score of the metric vector. Tickets with
/// neither, or with an unscorable vector, are excluded with a reason.
/// Input order is preserved; |scored| + |excluded| == |input|.
ResolveResult resolve_scored(const std::vector<Ticket>& tickets);

}  // namespace vulncluster::ingest
