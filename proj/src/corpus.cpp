#include "datasel/corpus.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace datasel {

using nlohmann::json;

namespace {

std::runtime_error line_error(const std::string& path, std::size_t line_no,
                              const std::string& what) {
    return std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

/// Parses a JSONL file, invoking fn(line_number, parsed_object) per
/// non-empty line. Parse failures carry the line number.
template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw line_error(path, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!row.is_object()) throw line_error(path, line_no, "expected a JSON object");
        fn(line_no, row);
    }
}

std::string require_string(const json& row, const char* key, const std::string& path,
                           std::size_t line_no) {
    if (!row.contains(key) || !row[key].is_string()) {
        throw line_error(path, line_no, std::string("missing or non-string field '") + key + "'");
    }
    return row[key].get<std::string>();
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

}  // namespace

bool Corpus::contains(const std::string& id) const {
    for (const auto& ex : examples) {
        if (ex.id == id) return true;
    }
    return false;
}

const Example& Corpus::at(const std::string& id) const {
    for (const auto& ex : examples) {
        if (ex.id == id) return ex;
    }
    throw std::invalid_argument("corpus has no example with id '" + id + "'");
}

std::int64_t whitespace_token_count(const std::string& text) {
    std::int64_t count = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        const bool ws = std::isspace(c) != 0;
        if (!ws && !in_token) ++count;
        in_token = !ws;
    }
    return count;
}

Corpus make_corpus(std::vector<Example> examples) {
    Corpus corpus;
    std::set<std::string> seen;
    for (auto& ex : examples) {
        if (ex.id.empty()) throw std::invalid_argument("example with empty id");
        if (!seen.insert(ex.id).second) {
            throw std::invalid_argument("duplicate example id '" + ex.id + "'");
        }
        if (ex.token_count < 1) {
            throw std::invalid_argument("example '" + ex.id + "': token_count must be >= 1");
        }
        corpus.total_tokens += ex.token_count;
    }
    corpus.examples = std::move(examples);
    return corpus;
}

Corpus load_corpus(const std::string& path) {
    std::vector<Example> examples;
    std::set<std::string> seen;
    for_each_jsonl(path, [&](std::size_t line_no, const json& row) {
        Example ex;
        ex.id = require_string(row, "id", path, line_no);
        if (ex.id.empty()) throw line_error(path, line_no, "empty id");
        if (!seen.insert(ex.id).second) {
            throw line_error(path, line_no, "duplicate id '" + ex.id + "'");
        }
        ex.text = require_string(row, "text", path, line_no);
        if (row.contains("token_count")) {
            if (!row["token_count"].is_number_integer()) {
                throw line_error(path, line_no, "token_count must be an integer");
            }
            ex.token_count = row["token_count"].get<std::int64_t>();
        } else {
            ex.token_count = whitespace_token_count(ex.text);
        }
        if (ex.token_count < 1) {
            throw line_error(path, line_no,
                             "id '" + ex.id + "': token_count must be >= 1 "
                             "(empty text needs an explicit count)");
        }
        examples.push_back(std::move(ex));
    });
    return make_corpus(std::move(examples));
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    auto out = open_for_write(path);
    for (const auto& ex : corpus.examples) {
        json row = {{"id", ex.id}, {"text", ex.text}, {"token_count", ex.token_count}};
        out << row.dump() << '\n';
    }
}

VectorTable load_vectors(const std::string& path, const Corpus& corpus) {
    VectorTable table;
    std::set<std::string> known;
    for (const auto& ex : corpus.examples) known.insert(ex.id);

    for_each_jsonl(path, [&](std::size_t line_no, const json& row) {
        const std::string id = require_string(row, "id", path, line_no);
        if (known.find(id) == known.end()) {
            throw line_error(path, line_no, "unknown id '" + id + "' (not in corpus)");
        }
        if (table.vectors.count(id) != 0) {
            throw line_error(path, line_no, "duplicate id '" + id + "'");
        }
        if (!row.contains("vector") || !row["vector"].is_array()) {
            throw line_error(path, line_no, "missing or non-array field 'vector'");
        }
        std::vector<double> vec;
        vec.reserve(row["vector"].size());
        for (const auto& v : row["vector"]) {
            if (!v.is_number()) throw line_error(path, line_no, "non-numeric vector entry");
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw line_error(path, line_no, "non-finite vector entry");
            vec.push_back(x);
        }
        if (table.vectors.empty()) {
            table.dim = static_cast<std::int64_t>(vec.size());
            if (table.dim == 0) throw line_error(path, line_no, "empty vector");
        } else if (static_cast<std::int64_t>(vec.size()) != table.dim) {
            throw line_error(path, line_no,
                             "dimension mismatch: expected " + std::to_string(table.dim) +
                                 ", got " + std::to_string(vec.size()));
        }
        table.vectors.emplace(id, std::move(vec));
    });

    std::vector<std::string> missing;
    for (const auto& id : known) {
        if (table.vectors.count(id) == 0) missing.push_back(id);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << path << ": missing vectors for " << missing.size() << " corpus id(s):";
        for (const auto& id : missing) msg << " " << id;
        throw std::runtime_error(msg.str());
    }
    return table;
}

void save_vectors(const VectorTable& table, const std::string& path) {
    auto out = open_for_write(path);
    for (const auto& [id, vec] : table.vectors) {
        json row = {{"id", id}, {"vector", vec}};
        out << row.dump() << '\n';
    }
}

ScoreTable load_scores(const std::string& path, const Corpus& corpus) {
    ScoreTable table;
    std::set<std::string> known;
    for (const auto& ex : corpus.examples) known.insert(ex.id);

    for_each_jsonl(path, [&](std::size_t line_no, const json& row) {
        const std::string id = require_string(row, "id", path, line_no);
        if (known.find(id) == known.end()) {
            throw line_error(path, line_no, "unknown id '" + id + "' (not in corpus)");
        }
        if (table.scores.count(id) != 0) {
            throw line_error(path, line_no, "duplicate id '" + id + "'");
        }
        if (!row.contains("score") || !row["score"].is_number()) {
            throw line_error(path, line_no, "missing or non-numeric field 'score'");
        }
        const double score = row["score"].get<double>();
        if (!std::isfinite(score)) throw line_error(path, line_no, "non-finite score");
        table.scores.emplace(id, score);
        if (row.contains("method") && row["method"].is_string() && table.method.empty()) {
            table.method = row["method"].get<std::string>();
        }
    });

    std::vector<std::string> missing;
    for (const auto& id : known) {
        if (table.scores.count(id) == 0) missing.push_back(id);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << path << ": missing scores for " << missing.size() << " corpus id(s):";
        for (const auto& id : missing) msg << " " << id;
        throw std::runtime_error(msg.str());
    }
    return table;
}

void save_scores(const ScoreTable& table, const std::string& path,
                 const std::vector<std::string>* id_order) {
    auto out = open_for_write(path);
    auto emit = [&](const std::string& id, double score) {
        json row = {{"id", id}, {"score", score}};
        if (!table.method.empty()) row["method"] = table.method;
        out << row.dump() << '\n';
    };
    if (id_order != nullptr) {
        for (const auto& id : *id_order) {
            auto it = table.scores.find(id);
            if (it == table.scores.end()) {
                throw std::invalid_argument("save_scores: id '" + id + "' not in table");
            }
            emit(id, it->second);
        }
    } else {
        for (const auto& [id, score] : table.scores) emit(id, score);
    }
}

}  // namespace datasel
