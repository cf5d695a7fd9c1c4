#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace datasel {

struct SimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;
};

/// |a intersect b| / |a union b|; two empty sets are identical, so 1.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Pairwise Jaccard similarity in label order (at least two labels).
SimilarityMatrix jaccard_matrix(const std::map<std::string, std::set<std::string>>& selections);

}  // namespace datasel
