#include "vulncluster/util.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "vulncluster/errors.hpp"

namespace vulncluster::util {

namespace fs = std::filesystem;

std::string format_g12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write: " + path.string());
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ull;
    }
    return state;
}

std::string hash_input(const fs::path& source) {
    std::vector<fs::path> files;
    if (fs::is_directory(source)) {
        for (const auto& entry : fs::recursive_directory_iterator(source))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
            return a.lexically_relative(source).string() < b.lexically_relative(source).string();
        });
    } else {
        files.push_back(source);
    }
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& f : files) {
        const std::string rel =
            fs::is_directory(source) ? f.lexically_relative(source).string() : f.filename().string();
        h = fnv1a64(rel, h);
        h = fnv1a64(std::string_view("\0", 1), h);
        h = fnv1a64(read_text_file(f), h);
        h = fnv1a64(std::string_view("\0", 1), h);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::vector<std::string>> csv_parse(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) rows.push_back(csv_split_line(line));
        start = end + 1;
    }
    return rows;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace vulncluster::util
