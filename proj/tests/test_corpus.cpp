#include "doctest.h"

#include <stdexcept>

#include <string>

#include "datasel/corpus.hpp"
#include "test_helpers.hpp"

using namespace datasel;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("load_corpus reads explicit token counts") {
    TempDir dir;
    const auto path = dir.file("corpus.jsonl");
    write_file(path,
               "{\"id\": \"a\", \"text\": \"alpha text\", \"token_count\": 3}\n"
               "{\"id\": \"b\", \"text\": \"beta\", \"token_count\": 5}\n");
    const Corpus corpus = load_corpus(path);
    CHECK(corpus.size() == 2);
    CHECK(corpus.total_tokens == 8);
    CHECK(corpus.examples[0].id == "a");
    CHECK(corpus.examples[1].token_count == 5);
}

TEST_CASE("load_corpus falls back to whitespace token counts") {
    TempDir dir;
    const auto path = dir.file("corpus.jsonl");
    write_file(path, "{\"id\": \"a\", \"text\": \"a b c\"}\n");
    const Corpus corpus = load_corpus(path);
    CHECK(corpus.examples[0].token_count == 3);

    CHECK(whitespace_token_count("") == 0);
    CHECK(whitespace_token_count("  padded   words \t here\n") == 3);
}

TEST_CASE("load_corpus reports duplicate ids and malformed lines") {
    TempDir dir;
    const auto dup = dir.file("dup.jsonl");
    write_file(dup,
               "{\"id\": \"x\", \"text\": \"one\"}\n"
               "{\"id\": \"x\", \"text\": \"two\"}\n");
    CHECK_THROWS_WITH_AS(load_corpus(dup), doctest::Contains("duplicate id 'x'"),
                         std::runtime_error);

    const auto bad = dir.file("bad.jsonl");
    write_file(bad, "{\"id\": \"x\", \"text\": \"fine\"}\nnot json\n");
    CHECK_THROWS_WITH_AS(load_corpus(bad), doctest::Contains(":2:"), std::runtime_error);

    const auto empty_text = dir.file("empty.jsonl");
    write_file(empty_text, "{\"id\": \"x\", \"text\": \"\"}\n");
    CHECK_THROWS_AS(load_corpus(empty_text), std::runtime_error);
}

TEST_CASE("load_vectors covers the corpus with a uniform dimension") {
    TempDir dir;
    const auto corpus_path = dir.file("c.jsonl");
    write_file(corpus_path,
               "{\"id\": \"a\", \"text\": \"t\", \"token_count\": 1}\n"
               "{\"id\": \"b\", \"text\": \"t\", \"token_count\": 1}\n");
    const Corpus corpus = load_corpus(corpus_path);

    const auto good = dir.file("v.jsonl");
    write_file(good,
               "{\"id\": \"a\", \"vector\": [1.0, 0.0, 2.5]}\n"
               "{\"id\": \"b\", \"vector\": [0.5, 1.0, -1.0]}\n");
    const VectorTable table = load_vectors(good, corpus);
    CHECK(table.dim == 3);
    CHECK(table.vectors.size() == 2);

    const auto mismatch = dir.file("vm.jsonl");
    write_file(mismatch,
               "{\"id\": \"a\", \"vector\": [1.0, 0.0, 2.5]}\n"
               "{\"id\": \"b\", \"vector\": [0.5, 1.0]}\n");
    CHECK_THROWS_WITH_AS(load_vectors(mismatch, corpus), doctest::Contains("dimension mismatch"),
                         std::runtime_error);

    const auto missing = dir.file("vmiss.jsonl");
    write_file(missing, "{\"id\": \"a\", \"vector\": [1.0, 0.0, 2.5]}\n");
    CHECK_THROWS_WITH_AS(load_vectors(missing, corpus), doctest::Contains("b"),
                         std::runtime_error);

    const auto unknown = dir.file("vu.jsonl");
    write_file(unknown,
               "{\"id\": \"a\", \"vector\": [1.0]}\n"
               "{\"id\": \"b\", \"vector\": [1.0]}\n"
               "{\"id\": \"zz\", \"vector\": [1.0]}\n");
    CHECK_THROWS_WITH_AS(load_vectors(unknown, corpus), doctest::Contains("unknown id 'zz'"),
                         std::runtime_error);
}

TEST_CASE("load_scores validates coverage and finiteness") {
    TempDir dir;
    const auto corpus_path = dir.file("c.jsonl");
    write_file(corpus_path,
               "{\"id\": \"a\", \"text\": \"t\", \"token_count\": 1}\n"
               "{\"id\": \"b\", \"text\": \"t\", \"token_count\": 1}\n"
               "{\"id\": \"c\", \"text\": \"t\", \"token_count\": 1}\n");
    const Corpus corpus = load_corpus(corpus_path);

    const auto good = dir.file("s.jsonl");
    write_file(good,
               "{\"id\": \"a\", \"score\": 0.1}\n"
               "{\"id\": \"b\", \"score\": 0.2}\n"
               "{\"id\": \"c\", \"score\": 0.3}\n");
    const ScoreTable table = load_scores(good, corpus);
    CHECK(table.scores.size() == 3);
    CHECK(table.scores.at("b") == 0.2);

    const auto nonfinite = dir.file("snan.jsonl");
    write_file(nonfinite,
               "{\"id\": \"a\", \"score\": 0.1}\n"
               "{\"id\": \"b\", \"score\": NaN}\n"
               "{\"id\": \"c\", \"score\": 0.3}\n");
    CHECK_THROWS_AS(load_scores(nonfinite, corpus), std::runtime_error);

    const auto extra = dir.file("sx.jsonl");
    write_file(extra,
               "{\"id\": \"a\", \"score\": 0.1}\n"
               "{\"id\": \"b\", \"score\": 0.2}\n"
               "{\"id\": \"c\", \"score\": 0.3}\n"
               "{\"id\": \"d\", \"score\": 0.4}\n");
    CHECK_THROWS_WITH_AS(load_scores(extra, corpus), doctest::Contains("unknown id 'd'"),
                         std::runtime_error);
}

TEST_CASE("save and load round-trip identically") {
    TempDir dir;
    std::vector<Example> examples = {{"a", "first text", 2}, {"b", "second", 1}, {"z9", "", 4}};
    const Corpus corpus = make_corpus(examples);

    const auto corpus_path = dir.file("round.jsonl");
    save_corpus(corpus, corpus_path);
    const Corpus reloaded = load_corpus(corpus_path);
    REQUIRE(reloaded.size() == corpus.size());
    CHECK(reloaded.total_tokens == corpus.total_tokens);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(reloaded.examples[i].id == corpus.examples[i].id);
        CHECK(reloaded.examples[i].text == corpus.examples[i].text);
        CHECK(reloaded.examples[i].token_count == corpus.examples[i].token_count);
    }

    ScoreTable scores;
    scores.method = "unit";
    scores.scores = {{"a", 0.25}, {"b", -1.75}, {"z9", 3.0}};
    const auto score_path = dir.file("scores.jsonl");
    save_scores(scores, score_path);
    const ScoreTable scores_back = load_scores(score_path, corpus);
    CHECK(scores_back.scores == scores.scores);
    CHECK(scores_back.method == "unit");

    VectorTable vectors;
    vectors.dim = 2;
    vectors.vectors = {{"a", {1.0, 2.0}}, {"b", {0.5, -0.25}}, {"z9", {0.0, 0.0}}};
    const auto vector_path = dir.file("vectors.jsonl");
    save_vectors(vectors, vector_path);
    const VectorTable vectors_back = load_vectors(vector_path, corpus);
    CHECK(vectors_back.dim == vectors.dim);
    CHECK(vectors_back.vectors == vectors.vectors);
}

TEST_CASE("loading never silently drops rows") {
    TempDir dir;
    const auto corpus_path = dir.file("c.jsonl");
    std::string corpus_text, score_text;
    const int n = 57;
    for (int i = 0; i < n; ++i) {
        corpus_text += "{\"id\": \"id" + std::to_string(i) + "\", \"text\": \"x\", "
                       "\"token_count\": 1}\n";
        score_text += "{\"id\": \"id" + std::to_string(i) +
                      "\", \"score\": " + std::to_string(i * 0.5) + "}\n";
    }
    write_file(corpus_path, corpus_text);
    const Corpus corpus = load_corpus(corpus_path);
    CHECK(corpus.size() == n);

    const auto score_path = dir.file("s.jsonl");
    write_file(score_path, score_text);
    CHECK(load_scores(score_path, corpus).scores.size() == n);
}
