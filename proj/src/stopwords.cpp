#include <string>
#include <vector>

namespace vulncluster::textproc {

// Snowball-derived English stopword list, normalized through the tokenizer
// rules (split on non-alphanumerics, entries shorter than 2 characters
// removed, deduplicated, sorted). Versioned with the repository so that
// vocabulary and keyword outputs are reproducible.
const std::vector<std::string>& stopwords() {
    static const std::vector<std::string> words = {
        "about", "above", "after", "again", "against", "all", "am", "an",
        "and", "any", "are", "aren", "as", "at", "be", "because",
        "been", "before", "being", "below", "between", "both", "but", "by",
        "can", "cannot", "could", "couldn", "did", "didn", "do", "does",
        "doesn", "doing", "don", "down", "during", "each", "few", "for",
        "from", "further", "had", "hadn", "has", "hasn", "have", "haven",
        "having", "he", "her", "here", "hers", "herself", "him", "himself",
        "his", "how", "if", "in", "into", "is", "isn", "it",
        "its", "itself", "let", "ll", "me", "more", "most", "mustn",
        "my", "myself", "no", "nor", "not", "of", "off", "on",
        "once", "only", "or", "other", "ought", "our", "ours", "ourselves",
        "out", "over", "own", "re", "same", "shan", "she", "should",
        "shouldn", "so", "some", "such", "than", "that", "the", "their",
        "theirs", "them", "themselves", "then", "there", "these", "they", "this",
        "those", "through", "to", "too", "under", "until", "up", "ve",
        "very", "was", "wasn", "we", "were", "weren", "what", "when",
        "where", "which", "while", "who", "whom", "why", "with", "won",
        "would", "wouldn", "you", "your", "yours", "yourself", "yourselves",
    };
    return words;
}

}  // namespace vulncluster::textproc
