#include "vulncluster/textproc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "vulncluster/errors.hpp"
#include "vulncluster/util.hpp"

namespace vulncluster::textproc {

namespace {

bool is_ascii_alnum(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool pure_digits(const std::string& token) {
    return std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_stopword(const std::string& token) {
    const auto& list = stopwords();
    return std::binary_search(list.begin(), list.end(), token);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= 2 && !pure_digits(current) && !is_stopword(current))
            tokens.push_back(current);
        current.clear();
    };
    for (char c : text) {
        if (is_ascii_alnum(c))
            current += to_lower_ascii(c);
        else
            flush();
    }
    flush();
    return tokens;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), term);
    if (it == terms.end() || *it != term) return std::nullopt;
    return static_cast<std::size_t>(it - terms.begin());
}

Vocabulary build_vocabulary(const std::vector<TokenizedDoc>& docs, std::size_t min_df) {
    if (min_df < 1) throw ConfigError("min_df must be >= 1");

    std::map<std::string, std::size_t> df;  // sorted by term
    for (const auto& doc : docs) {
        const std::set<std::string> unique(doc.tokens.begin(), doc.tokens.end());
        for (const auto& term : unique) ++df[term];
    }

    Vocabulary vocab;
    vocab.n_docs = docs.size();
    for (const auto& [term, count] : df) {
        if (count >= min_df) {
            vocab.terms.push_back(term);
            vocab.doc_freq.push_back(count);
        }
    }
    return vocab;
}

double term_frequency(const TokenizedDoc& doc, std::string_view term) {
    if (doc.tokens.empty())
        throw NumericError("term frequency undefined for zero-token document '" + doc.doc_id + "'");
    const auto occurrences =
        std::count(doc.tokens.begin(), doc.tokens.end(), std::string(term));
    return static_cast<double>(occurrences) / static_cast<double>(doc.tokens.size());
}

double inverse_document_frequency(const Vocabulary& vocab, std::string_view term) {
    const auto idx = vocab.index_of(term);
    if (!idx) throw NumericError("term not in vocabulary: " + std::string(term));
    return std::log(static_cast<double>(vocab.n_docs) / static_cast<double>(vocab.doc_freq[*idx]));
}

TfidfResult tfidf_matrix(const std::vector<TokenizedDoc>& docs, std::size_t min_df) {
    TfidfResult result;

    std::vector<const TokenizedDoc*> included;
    for (const auto& doc : docs) {
        if (doc.tokens.empty())
            result.empty_doc_ids.push_back(doc.doc_id);
        else
            included.push_back(&doc);
    }

    std::vector<TokenizedDoc> included_docs;
    included_docs.reserve(included.size());
    for (const auto* doc : included) included_docs.push_back(*doc);

    Vocabulary vocab = build_vocabulary(included_docs, min_df);
    if (!included.empty() && vocab.terms.empty())
        throw NumericError("no term meets min_df = " + std::to_string(min_df) +
                           "; retry with a lower min_df");

    std::vector<double> idf(vocab.terms.size());
    for (std::size_t j = 0; j < vocab.terms.size(); ++j)
        idf[j] = std::log(static_cast<double>(vocab.n_docs) /
                          static_cast<double>(vocab.doc_freq[j]));

    Matrix weights(included.size(), vocab.terms.size());
    for (std::size_t i = 0; i < included.size(); ++i) {
        const auto& tokens = included[i]->tokens;
        std::map<std::string, std::size_t> counts;
        for (const auto& token : tokens) ++counts[token];
        // tf denominator is the document's total token count, tokens dropped
        // by min_df included.
        const double total = static_cast<double>(tokens.size());
        for (const auto& [token, count] : counts) {
            if (auto j = vocab.index_of(token))
                weights(i, *j) = (static_cast<double>(count) / total) * idf[*j];
        }
    }

    result.matrix.doc_ids.reserve(included.size());
    for (const auto* doc : included) result.matrix.doc_ids.push_back(doc->doc_id);
    result.matrix.vocabulary = std::move(vocab);
    result.matrix.weights = std::move(weights);
    return result;
}

std::string to_csv(const TfidfMatrix& matrix) {
    std::string out = "doc_id";
    for (const auto& term : matrix.vocabulary.terms) {
        out += ',';
        out += util::csv_escape(term);
    }
    out += '\n';
    for (std::size_t i = 0; i < matrix.weights.rows(); ++i) {
        out += util::csv_escape(matrix.doc_ids[i]);
        for (std::size_t j = 0; j < matrix.weights.cols(); ++j) {
            out += ',';
            out += util::format_g12(matrix.weights(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace vulncluster::textproc
