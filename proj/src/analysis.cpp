#include "datasel/analysis.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace datasel {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t intersection = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++intersection;
            ++ia;
            ++ib;
        }
    }
    const std::size_t uni = a.size() + b.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(uni);
}

SimilarityMatrix jaccard_matrix(const std::map<std::string, std::set<std::string>>& selections) {
    if (selections.size() < 2) {
        throw std::invalid_argument("jaccard_matrix: need at least 2 labelled selections");
    }
    SimilarityMatrix out;
    std::vector<const std::set<std::string>*> sets;
    for (const auto& [label, ids] : selections) {
        out.labels.push_back(label);
        sets.push_back(&ids);
    }
    const std::size_t n = sets.size();
    out.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = jaccard(*sets[i], *sets[j]);
            out.values[i][j] = v;
            out.values[j][i] = v;
        }
    }
    return out;
}

}  // namespace datasel
