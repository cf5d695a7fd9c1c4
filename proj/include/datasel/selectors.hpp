#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "datasel/corpus.hpp"

namespace datasel {

/// Okapi BM25 free parameters (canonical defaults).
struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

enum class PplMode { Top, Mid };

std::string to_string(PplMode mode);
PplMode ppl_mode_from_string(const std::string& s);

/// Mean Okapi BM25 relevance of each training example against the
/// validation set. Documents are the training examples, queries the
/// validation examples. IDF uses the +1-smoothed form
///   idf(t) = ln(1 + (n - df + 0.5) / (df + 0.5))
/// over the training corpus, so scores are non-negative. Tokens are
/// lowercased maximal ASCII-alphanumeric runs. The mean over validation
/// accumulates in ascending validation-id order; `threads` <= 0 means one
/// worker per hardware thread.
ScoreTable bm25_utility(const Corpus& train, const Corpus& validation,
                        const Bm25Params& params = {}, int threads = 0);

/// Mean cosine similarity of each training vector against the validation
/// vectors (ascending-id accumulation). Cosine with a zero vector is 0.
ScoreTable embed_utility(const VectorTable& train_vecs, const VectorTable& val_vecs,
                         int threads = 0);

/// Deterministic fallback embedder: hashed TF-IDF into `dim` buckets,
/// L2-normalized. Token t maps through a seeded 64-bit FNV-1a/splitmix
/// hash h; bucket = (h >> 1) % dim, sign = h & 1. IDF is the smoothed
/// ln((1 + n) / (1 + df)) + 1. Empty text yields the zero vector.
VectorTable hashed_tfidf_embed(const Corpus& corpus, std::int64_t dim, std::uint64_t seed);

/// Total order over the scored ids. Top: score descending, ties by
/// ascending id. Mid: ascending distance |rank - median_rank|, where tied
/// scores share the mean of their positional ranks in the Top order and
/// median_rank = (n - 1) / 2; remaining ties by ascending id.
std::vector<std::string> ppl_rank(const ScoreTable& scores, PplMode mode);

/// score(x) = eta * <g_x, mean validation feature> (plain inner product,
/// ascending-id accumulation of the validation mean).
ScoreTable gradient_utility(const VectorTable& train_feats, const VectorTable& val_feats,
                            double eta, int threads = 0);

/// I.i.d. uniform(0,1) scores, deterministic per seed: ids are visited in
/// ascending order and each draw is ((mt19937_64() >> 11) + 0.5) * 2^-53,
/// which lies strictly inside (0, 1).
ScoreTable random_utility(const Corpus& corpus, std::uint64_t seed);

}  // namespace datasel
