#include "datasel/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "parallel.hpp"

namespace datasel {

namespace {

std::vector<std::string> tokenize_alnum(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                           (c >= 'A' && c <= 'Z');
        if (alnum) {
            current.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

using TermCounts = std::unordered_map<std::string, std::int64_t>;

TermCounts count_terms(const std::vector<std::string>& tokens) {
    TermCounts counts;
    for (const auto& t : tokens) ++counts[t];
    return counts;
}

/// Seeded 64-bit string hash: FNV-1a over the bytes followed by the
/// splitmix64 finalizer so low bits are well mixed.
std::uint64_t hash_token(const std::string& token, std::uint64_t seed) {
    std::uint64_t h = seed ^ 0xcbf29ce484222325ULL;
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void require_same_dim(const VectorTable& a, const VectorTable& b, const char* op) {
    if (a.dim != b.dim) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.dim) + " vs " + std::to_string(b.dim) + ")");
    }
}

}  // namespace

std::string to_string(PplMode mode) { return mode == PplMode::Top ? "top" : "mid"; }

PplMode ppl_mode_from_string(const std::string& s) {
    if (s == "top") return PplMode::Top;
    if (s == "mid") return PplMode::Mid;
    throw std::invalid_argument("unknown ppl mode '" + s + "' (expected top|mid)");
}

ScoreTable bm25_utility(const Corpus& train, const Corpus& validation, const Bm25Params& params,
                        int threads) {
    if (train.examples.empty()) throw std::invalid_argument("bm25_utility: empty training corpus");
    if (validation.examples.empty()) {
        throw std::invalid_argument("bm25_utility: empty validation set");
    }
    if (params.k1 < 0.0) throw std::invalid_argument("bm25_utility: k1 must be >= 0");
    if (params.b < 0.0 || params.b > 1.0) {
        throw std::invalid_argument("bm25_utility: b must lie in [0, 1]");
    }

    const std::size_t n_docs = train.examples.size();
    std::vector<TermCounts> doc_terms(n_docs);
    std::vector<double> doc_len(n_docs);
    TermCounts doc_freq;
    double total_len = 0.0;
    for (std::size_t i = 0; i < n_docs; ++i) {
        const auto tokens = tokenize_alnum(train.examples[i].text);
        doc_len[i] = static_cast<double>(tokens.size());
        total_len += doc_len[i];
        doc_terms[i] = count_terms(tokens);
        for (const auto& [term, count] : doc_terms[i]) ++doc_freq[term];
    }
    const double avg_len = total_len / static_cast<double>(n_docs);

    std::unordered_map<std::string, double> idf;
    idf.reserve(doc_freq.size());
    const double n = static_cast<double>(n_docs);
    for (const auto& [term, df] : doc_freq) {
        const double d = static_cast<double>(df);
        idf[term] = std::log(1.0 + (n - d + 0.5) / (d + 0.5));
    }

    // Queries as token multisets, in ascending validation-id order so the
    // mean accumulates identically regardless of worker count.
    std::vector<std::vector<std::string>> queries;
    {
        std::vector<const Example*> val_sorted;
        val_sorted.reserve(validation.examples.size());
        for (const auto& ex : validation.examples) val_sorted.push_back(&ex);
        std::sort(val_sorted.begin(), val_sorted.end(),
                  [](const Example* a, const Example* b) { return a->id < b->id; });
        for (const auto* ex : val_sorted) queries.push_back(tokenize_alnum(ex->text));
    }

    std::vector<double> result(n_docs, 0.0);
    detail::parallel_for(n_docs, threads, [&](std::size_t i) {
        const auto& terms = doc_terms[i];
        const double len_norm = params.k1 * (1.0 - params.b + params.b * (avg_len > 0.0
                                                                              ? doc_len[i] / avg_len
                                                                              : 0.0));
        double sum = 0.0;
        for (const auto& query : queries) {
            double score = 0.0;
            for (const auto& token : query) {
                const auto tf_it = terms.find(token);
                if (tf_it == terms.end()) continue;
                const double tf = static_cast<double>(tf_it->second);
                score += idf[token] * tf * (params.k1 + 1.0) / (tf + len_norm);
            }
            sum += score;
        }
        result[i] = sum / static_cast<double>(queries.size());
    });

    ScoreTable table;
    table.method = "bm25";
    for (std::size_t i = 0; i < n_docs; ++i) table.scores[train.examples[i].id] = result[i];
    return table;
}

ScoreTable embed_utility(const VectorTable& train_vecs, const VectorTable& val_vecs,
                         int threads) {
    if (val_vecs.vectors.empty()) throw std::invalid_argument("embed_utility: empty validation");
    require_same_dim(train_vecs, val_vecs, "embed_utility");

    // Precompute validation norms; the map iterates in ascending-id order.
    std::vector<const std::vector<double>*> vals;
    std::vector<double> val_norms;
    for (const auto& [id, vec] : val_vecs.vectors) {
        vals.push_back(&vec);
        val_norms.push_back(norm(vec));
    }

    std::vector<const std::vector<double>*> rows;
    std::vector<const std::string*> row_ids;
    for (const auto& [id, vec] : train_vecs.vectors) {
        row_ids.push_back(&id);
        rows.push_back(&vec);
    }

    std::vector<double> result(rows.size(), 0.0);
    detail::parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double row_norm = norm(*rows[i]);
        double sum = 0.0;
        if (row_norm > 0.0) {
            for (std::size_t j = 0; j < vals.size(); ++j) {
                if (val_norms[j] > 0.0) {
                    sum += dot(*rows[i], *vals[j]) / (row_norm * val_norms[j]);
                }
            }
        }
        result[i] = sum / static_cast<double>(vals.size());
    });

    ScoreTable table;
    table.method = "embed";
    for (std::size_t i = 0; i < rows.size(); ++i) table.scores[*row_ids[i]] = result[i];
    return table;
}

VectorTable hashed_tfidf_embed(const Corpus& corpus, std::int64_t dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("hashed_tfidf_embed: dim must be >= 1");

    std::vector<TermCounts> doc_terms(corpus.examples.size());
    TermCounts doc_freq;
    for (std::size_t i = 0; i < corpus.examples.size(); ++i) {
        doc_terms[i] = count_terms(tokenize_alnum(corpus.examples[i].text));
        for (const auto& [term, count] : doc_terms[i]) ++doc_freq[term];
    }
    const double n = static_cast<double>(corpus.examples.size());

    VectorTable table;
    table.dim = dim;
    for (std::size_t i = 0; i < corpus.examples.size(); ++i) {
        std::vector<double> vec(static_cast<std::size_t>(dim), 0.0);
        for (const auto& [term, tf] : doc_terms[i]) {
            const double idf =
                std::log((1.0 + n) / (1.0 + static_cast<double>(doc_freq[term]))) + 1.0;
            const std::uint64_t h = hash_token(term, seed);
            const std::size_t bucket = static_cast<std::size_t>((h >> 1) %
                                                                static_cast<std::uint64_t>(dim));
            const double sign = (h & 1ULL) != 0 ? 1.0 : -1.0;
            vec[bucket] += sign * static_cast<double>(tf) * idf;
        }
        const double len = norm(vec);
        if (len > 0.0) {
            for (auto& v : vec) v /= len;
        }
        table.vectors.emplace(corpus.examples[i].id, std::move(vec));
    }
    return table;
}

std::vector<std::string> ppl_rank(const ScoreTable& scores, PplMode mode) {
    std::vector<std::pair<std::string, double>> order(scores.scores.begin(), scores.scores.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    if (mode == PplMode::Top) {
        std::vector<std::string> ids;
        ids.reserve(order.size());
        for (const auto& [id, score] : order) ids.push_back(id);
        return ids;
    }

    // Mid: tied scores share the mean of their positional ranks, so a
    // fully tied table degenerates to ascending-id order.
    const std::size_t n = order.size();
    std::vector<double> rank(n, 0.0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && order[j].second == order[i].second) ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j) - 1.0) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[k] = mean_rank;
        i = j;
    }
    const double median_rank = (static_cast<double>(n) - 1.0) / 2.0;

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double da = std::abs(rank[a] - median_rank);
        const double db = std::abs(rank[b] - median_rank);
        if (da != db) return da < db;
        return order[a].first < order[b].first;
    });

    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i : idx) ids.push_back(order[i].first);
    return ids;
}

ScoreTable gradient_utility(const VectorTable& train_feats, const VectorTable& val_feats,
                            double eta, int threads) {
    if (!(eta > 0.0)) throw std::invalid_argument("gradient_utility: eta must be positive");
    if (val_feats.vectors.empty()) {
        throw std::invalid_argument("gradient_utility: empty validation");
    }
    require_same_dim(train_feats, val_feats, "gradient_utility");

    std::vector<double> mean_val(static_cast<std::size_t>(val_feats.dim), 0.0);
    for (const auto& [id, vec] : val_feats.vectors) {
        for (std::size_t i = 0; i < mean_val.size(); ++i) mean_val[i] += vec[i];
    }
    for (auto& v : mean_val) v /= static_cast<double>(val_feats.vectors.size());

    std::vector<const std::vector<double>*> rows;
    std::vector<const std::string*> row_ids;
    for (const auto& [id, vec] : train_feats.vectors) {
        row_ids.push_back(&id);
        rows.push_back(&vec);
    }
    std::vector<double> result(rows.size(), 0.0);
    detail::parallel_for(rows.size(), threads,
                         [&](std::size_t i) { result[i] = eta * dot(*rows[i], mean_val); });

    ScoreTable table;
    table.method = "grad";
    for (std::size_t i = 0; i < rows.size(); ++i) table.scores[*row_ids[i]] = result[i];
    return table;
}

ScoreTable random_utility(const Corpus& corpus, std::uint64_t seed) {
    std::vector<std::string> ids;
    ids.reserve(corpus.examples.size());
    for (const auto& ex : corpus.examples) ids.push_back(ex.id);
    std::sort(ids.begin(), ids.end());

    std::mt19937_64 engine(seed);
    ScoreTable table;
    table.method = "random";
    for (const auto& id : ids) {
        const double u =
            (static_cast<double>(engine() >> 11) + 0.5) * (1.0 / 9007199254740992.0);  // 2^-53
        table.scores[id] = u;
    }
    return table;
}

}  // namespace datasel
