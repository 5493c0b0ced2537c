#include "vulncluster/textproc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "vulncluster/errors.hpp"

using namespace vulncluster;
using textproc::TokenizedDoc;

namespace {

std::vector<TokenizedDoc> docs_from(const std::vector<std::vector<std::string>>& tokens) {
    std::vector<TokenizedDoc> docs;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        docs.push_back({"d" + std::to_string(i), tokens[i]});
    return docs;
}

// Brute-force tf-idf with explicit counts, used as the oracle.
double reference_weight(const std::vector<TokenizedDoc>& docs, std::size_t doc,
                        const std::string& term) {
    std::size_t count = 0;
    for (const auto& t : docs[doc].tokens)
        if (t == term) ++count;
    std::size_t df = 0;
    for (const auto& d : docs)
        if (std::find(d.tokens.begin(), d.tokens.end(), term) != d.tokens.end()) ++df;
    const double tf = static_cast<double>(count) / static_cast<double>(docs[doc].tokens.size());
    return tf * std::log(static_cast<double>(docs.size()) / static_cast<double>(df));
}

}  // namespace

TEST_CASE("tokenizer lowercases, splits, and filters") {
    CHECK(textproc::tokenize("Buffer overflow in the ROS node") ==
          std::vector<std::string>{"buffer", "overflow", "ros", "node"});
    CHECK(textproc::tokenize("TCP/IP v2 stack") ==
          std::vector<std::string>{"tcp", "ip", "v2", "stack"});
    // Pure digits and one-character fragments disappear; digit-letter mixes stay.
    CHECK(textproc::tokenize("CVE-2020-10271 affects v2, build 42, rev B") ==
          std::vector<std::string>{"cve", "affects", "v2", "build", "rev"});
    CHECK(textproc::tokenize("").empty());
    CHECK(textproc::tokenize("The a an 42 I").empty());
}

TEST_CASE("stopword list is sorted and catches function words") {
    const auto& words = textproc::stopwords();
    CHECK(std::is_sorted(words.begin(), words.end()));
    CHECK(std::adjacent_find(words.begin(), words.end()) == words.end());
    for (const char* w : {"the", "in", "and", "is", "not", "own", "until"})
        CHECK(std::binary_search(words.begin(), words.end(), std::string(w)));
    for (const char* w : {"buffer", "robot", "v2", "firmware"})
        CHECK_FALSE(std::binary_search(words.begin(), words.end(), std::string(w)));
}

TEST_CASE("vocabulary keeps terms meeting min_df and counts documents") {
    // alpha in 3 docs, beta in 2, gamma in 1 (with repeats inside one doc).
    const auto docs = docs_from({{"alpha", "beta"},
                                 {"alpha", "gamma", "gamma"},
                                 {"alpha", "beta"}});

    const auto v1 = textproc::build_vocabulary(docs, 1);
    CHECK(v1.terms == std::vector<std::string>{"alpha", "beta", "gamma"});
    CHECK(v1.doc_freq == std::vector<std::size_t>{3, 2, 1});
    CHECK(v1.n_docs == 3);

    const auto v2 = textproc::build_vocabulary(docs, 2);
    CHECK(v2.terms == std::vector<std::string>{"alpha", "beta"});

    const auto v3 = textproc::build_vocabulary(docs, 3);
    CHECK(v3.terms == std::vector<std::string>{"alpha"});

    const auto v4 = textproc::build_vocabulary(docs, 4);
    CHECK(v4.terms.empty());

    CHECK_THROWS_AS(textproc::build_vocabulary(docs, 0), ConfigError);

    CHECK(v1.index_of("beta") == std::size_t{1});
    CHECK_FALSE(v1.index_of("delta").has_value());
}

TEST_CASE("term frequency uses the document's total token count") {
    const TokenizedDoc doc{"d", {"alpha", "beta", "alpha", "alpha"}};
    CHECK(textproc::term_frequency(doc, "alpha") == 0.75);
    CHECK(textproc::term_frequency(doc, "beta") == 0.25);
    CHECK(textproc::term_frequency(doc, "missing") == 0.0);
    CHECK_THROWS_AS(textproc::term_frequency({"e", {}}, "alpha"), NumericError);
}

TEST_CASE("idf is the natural log of N over df") {
    const auto docs = docs_from({{"alpha", "beta"},
                                 {"alpha"},
                                 {"alpha"},
                                 {"alpha"},
                                 {"alpha"},
                                 {"alpha"},
                                 {"alpha"},
                                 {"alpha"},
                                 {"alpha"},
                                 {"alpha"}});
    const auto vocab = textproc::build_vocabulary(docs, 1);
    CHECK(textproc::inverse_document_frequency(vocab, "alpha") == 0.0);
    CHECK(textproc::inverse_document_frequency(vocab, "beta") ==
          doctest::Approx(std::log(10.0)).epsilon(1e-9));
    CHECK_THROWS_AS(textproc::inverse_document_frequency(vocab, "delta"), NumericError);
}

TEST_CASE("identical documents produce an exactly zero matrix") {
    const auto docs = docs_from({{"alpha", "beta"}, {"alpha", "beta"}, {"alpha", "beta"}});
    const auto result = textproc::tfidf_matrix(docs, 1);
    CHECK(result.matrix.weights.rows() == 3);
    CHECK(result.matrix.weights.cols() == 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(result.matrix.weights(i, j) == 0.0);
}

TEST_CASE("small corpus matches hand computation") {
    const auto docs = docs_from({{"a1", "b1"}, {"a1", "c1"}, {"a1", "b1", "b1"}});
    const auto result = textproc::tfidf_matrix(docs, 1);
    const auto& m = result.matrix;
    REQUIRE(m.vocabulary.terms == std::vector<std::string>{"a1", "b1", "c1"});
    const double ln32 = std::log(3.0 / 2.0);
    const double ln3 = std::log(3.0);
    // Row d0: tf(a1)=1/2 idf=0; tf(b1)=1/2 idf=ln(3/2).
    CHECK(m.weights(0, 0) == 0.0);
    CHECK(m.weights(0, 1) == doctest::Approx(0.5 * ln32).epsilon(1e-12));
    CHECK(m.weights(0, 2) == 0.0);
    // Row d1: tf(c1)=1/2 idf=ln(3).
    CHECK(m.weights(1, 1) == 0.0);
    CHECK(m.weights(1, 2) == doctest::Approx(0.5 * ln3).epsilon(1e-12));
    // Row d2: tf(b1)=2/3.
    CHECK(m.weights(2, 1) == doctest::Approx(2.0 / 3.0 * ln32).epsilon(1e-12));
}

TEST_CASE("tf denominator includes tokens dropped by min_df") {
    const auto docs = docs_from({{"alpha", "beta"}, {"alpha", "gamma"}, {"delta", "gamma"}});
    const auto result = textproc::tfidf_matrix(docs, 2);
    const auto& m = result.matrix;
    REQUIRE(m.vocabulary.terms == std::vector<std::string>{"alpha", "gamma"});
    // d0 has 2 tokens even though beta left the vocabulary: tf(alpha) = 1/2.
    CHECK(m.weights(0, 0) == doctest::Approx(0.5 * std::log(3.0 / 2.0)).epsilon(1e-15));
}

TEST_CASE("documents with no tokens are reported, not vectorized") {
    std::vector<TokenizedDoc> docs = {{"full", {"alpha", "beta"}},
                                      {"empty", {}},
                                      {"full2", {"alpha", "beta"}}};
    const auto result = textproc::tfidf_matrix(docs, 1);
    CHECK(result.empty_doc_ids == std::vector<std::string>{"empty"});
    CHECK(result.matrix.doc_ids == std::vector<std::string>{"full", "full2"});
    CHECK(result.matrix.weights.rows() == 2);
}

TEST_CASE("an unreachable min_df is a clear error") {
    const auto docs = docs_from({{"alpha"}, {"beta"}});
    try {
        textproc::tfidf_matrix(docs, 5);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("min_df") != std::string::npos);
    }
}

TEST_CASE("matrix equals the brute-force oracle on a 10-document corpus") {
    // Deterministic synthetic corpus: doc i holds tokens t0..t(i), so term tj
    // has document frequency 10 - j.
    std::vector<std::vector<std::string>> tokens(10);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            tokens[i].push_back("t" + std::to_string(j));
    // Add repeats so tf varies: doc i repeats t0 i times.
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t r = 0; r < i; ++r) tokens[i].push_back("t0");
    const auto docs = docs_from(tokens);

    const auto result = textproc::tfidf_matrix(docs, 1);
    const auto& m = result.matrix;
    REQUIRE(m.weights.rows() == 10);
    for (std::size_t i = 0; i < m.weights.rows(); ++i)
        for (std::size_t j = 0; j < m.weights.cols(); ++j) {
            const double expected = reference_weight(docs, i, m.vocabulary.terms[j]);
            CHECK(m.weights(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
}

TEST_CASE("weights are nonnegative and tf sums bound rows") {
    const auto docs = docs_from({{"alpha", "beta", "alpha"},
                                 {"beta", "gamma"},
                                 {"gamma", "alpha", "delta", "delta"}});
    const auto result = textproc::tfidf_matrix(docs, 1);
    const auto& m = result.matrix;
    const double max_idf = std::log(3.0);
    for (std::size_t i = 0; i < m.weights.rows(); ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < m.weights.cols(); ++j) {
            CHECK(m.weights(i, j) >= 0.0);
            row_sum += m.weights(i, j);
        }
        // Sum of tf over a row is at most 1, so the weighted sum is at most
        // the largest idf.
        CHECK(row_sum <= max_idf + 1e-12);
    }
}

TEST_CASE("permuting documents permutes rows") {
    const auto docs = docs_from({{"alpha", "beta"}, {"beta", "gamma"}, {"gamma"}});
    std::vector<TokenizedDoc> shuffled = {docs[2], docs[0], docs[1]};
    const auto a = textproc::tfidf_matrix(docs, 1);
    const auto b = textproc::tfidf_matrix(shuffled, 1);
    REQUIRE(a.matrix.vocabulary.terms == b.matrix.vocabulary.terms);
    const std::map<std::string, std::size_t> b_row = {
        {b.matrix.doc_ids[0], 0}, {b.matrix.doc_ids[1], 1}, {b.matrix.doc_ids[2], 2}};
    for (std::size_t i = 0; i < a.matrix.weights.rows(); ++i) {
        const std::size_t bi = b_row.at(a.matrix.doc_ids[i]);
        for (std::size_t j = 0; j < a.matrix.weights.cols(); ++j)
            CHECK(a.matrix.weights(i, j) == b.matrix.weights(bi, j));
    }
}

TEST_CASE("duplicating the corpus leaves weights unchanged") {
    // df and N double together, so idf and every weight stay identical.
    const auto docs = docs_from({{"alpha", "beta"}, {"beta", "gamma"}, {"gamma", "alpha"}});
    std::vector<TokenizedDoc> doubled = docs;
    for (const auto& d : docs) doubled.push_back({d.doc_id + "_copy", d.tokens});
    const auto a = textproc::tfidf_matrix(docs, 1);
    const auto b = textproc::tfidf_matrix(doubled, 1);
    REQUIRE(a.matrix.vocabulary.terms == b.matrix.vocabulary.terms);
    for (std::size_t i = 0; i < a.matrix.weights.rows(); ++i)
        for (std::size_t j = 0; j < a.matrix.weights.cols(); ++j)
            CHECK(a.matrix.weights(i, j) == doctest::Approx(b.matrix.weights(i, j)).epsilon(1e-15));
}

TEST_CASE("raising min_df shrinks the vocabulary monotonically") {
    const auto docs = docs_from({{"alpha", "beta", "gamma"},
                                 {"alpha", "beta"},
                                 {"alpha", "delta"},
                                 {"alpha", "beta", "delta"}});
    std::vector<std::string> previous;
    for (std::size_t min_df = 1; min_df <= 4; ++min_df) {
        const auto vocab = textproc::build_vocabulary(docs, min_df);
        if (min_df > 1)
            CHECK(std::includes(previous.begin(), previous.end(), vocab.terms.begin(),
                                vocab.terms.end()));
        previous = vocab.terms;
    }
}

TEST_CASE("csv export carries header and g12 weights") {
    const auto docs = docs_from({{"alpha", "beta"}, {"alpha"}});
    const auto result = textproc::tfidf_matrix(docs, 1);
    const auto csv = textproc::to_csv(result.matrix);
    CHECK(csv.rfind("doc_id,alpha,beta\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
