#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace datasel {

struct Example {
    std::string id;
    std::string text;
    std::int64_t token_count = 0;
};

/// An ordered set of examples with unique ids. total_tokens is maintained
/// as the sum of member token counts.
struct Corpus {
    std::vector<Example> examples;
    std::int64_t total_tokens = 0;

    bool contains(const std::string& id) const;
    const Example& at(const std::string& id) const;
    std::size_t size() const { return examples.size(); }
};

/// Per-example utility values for one scoring method. Keys cover exactly
/// the ids of the corpus the table was built against.
struct ScoreTable {
    std::string method;
    std::map<std::string, double> scores;
};

/// Per-example dense vectors of uniform dimensionality (embeddings or
/// gradient features, ingested rather than computed).
struct VectorTable {
    std::int64_t dim = 0;
    std::map<std::string, std::vector<double>> vectors;
};

/// Number of whitespace-separated runs in text; the default token count
/// when a corpus line does not carry one.
std::int64_t whitespace_token_count(const std::string& text);

Corpus make_corpus(std::vector<Example> examples);

/// Loads a JSONL corpus: {"id": str, "text": str, "token_count": int?}.
/// Malformed lines are reported with their 1-based line number; duplicate
/// ids are an error.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

/// Loads JSONL {"id": str, "vector": [num, ...]}. The dimensionality is
/// inferred from the first row; every corpus id must be covered.
VectorTable load_vectors(const std::string& path, const Corpus& corpus);
void save_vectors(const VectorTable& table, const std::string& path);

/// Loads JSONL {"id": str, "score": num} with full corpus coverage and
/// finite scores.
ScoreTable load_scores(const std::string& path, const Corpus& corpus);
void save_scores(const ScoreTable& table, const std::string& path,
                 const std::vector<std::string>* id_order = nullptr);

}  // namespace datasel
