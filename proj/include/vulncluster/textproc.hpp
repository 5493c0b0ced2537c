#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vulncluster/matrix.hpp"

namespace vulncluster::textproc {

struct TokenizedDoc {
    std::string doc_id;
    std::vector<std::string> tokens;  // nonempty, lowercase, no whitespace
};

/// Terms retained after the min_df cutoff, sorted lexicographically, with
/// per-term document frequencies.
struct Vocabulary {
    std::vector<std::string> terms;
    std::vector<std::size_t> doc_freq;  // aligned with terms
    std::size_t n_docs = 0;

    std::optional<std::size_t> index_of(std::string_view term) const;
};

/// Documents-by-terms weight matrix. Row order follows input doc order,
/// column order follows vocabulary order.
struct TfidfMatrix {
    std::vector<std::string> doc_ids;
    Vocabulary vocabulary;
    Matrix weights;
};

/// Lowercases, splits on any character that is not an ASCII letter or digit,
/// then drops pure-digit tokens, tokens shorter than 2 characters and
/// stopwords. No stemming.
std::vector<std::string> tokenize(std::string_view text);

/// The fixed English stopword list shipped with the artifact, sorted.
const std::vector<std::string>& stopwords();

/// Retains exactly the terms whose document frequency is >= min_df.
/// doc_freq counts documents containing the term, not token occurrences.
Vocabulary build_vocabulary(const std::vector<TokenizedDoc>& docs, std::size_t min_df);

/// Occurrences of term divided by the document's total token count.
/// Throws NumericError for a zero-token document.
double term_frequency(const TokenizedDoc& doc, std::string_view term);

/// ln(N / df), no smoothing. Throws NumericError for an unknown term.
double inverse_document_frequency(const Vocabulary& vocab, std::string_view term);

struct TfidfResult {
    TfidfMatrix matrix;
    std::vector<std::string> empty_doc_ids;  // zero-token docs, excluded
};

/// weights[i][j] = tf(doc_i, term_j) * idf(term_j). Zero-token documents are
/// excluded from the matrix and reported. The tf denominator counts all
/// tokens of the document, including ones later dropped by min_df.
/// Throws NumericError when no term survives min_df.
TfidfResult tfidf_matrix(const std::vector<TokenizedDoc>& docs, std::size_t min_df);

/// CSV dump: header row of terms, first column of doc ids, values at 12
/// significant digits.
std::string to_csv(const TfidfMatrix& matrix);

}  // namespace vulncluster::textproc
