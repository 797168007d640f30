#include "phenopipe/ml/features.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "phenopipe/errors.hpp"

namespace phenopipe::ml {

long FeatureMatrix::total() const {
    long sum = 0;
    for (const auto& row : counts) {
        for (int v : row) sum += v;
    }
    return sum;
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<std::size_t>& indices) const {
    FeatureMatrix out;
    out.vocabulary = vocabulary;
    out.row_ids.reserve(indices.size());
    out.counts.reserve(indices.size());
    for (std::size_t i : indices) {
        out.row_ids.push_back(row_ids.at(i));
        out.counts.push_back(counts.at(i));
    }
    return out;
}

FeatureMatrix build_feature_matrix(const std::vector<std::int64_t>& note_ids,
                                   const ConceptAnnotations& annotations,
                                   const std::optional<std::vector<std::string>>& vocabulary) {
    FeatureMatrix m;
    m.row_ids = note_ids;
    if (vocabulary) {
        m.vocabulary = *vocabulary;
    } else {
        std::set<std::string> cuis;
        for (const auto& a : annotations) cuis.insert(a.cui);
        m.vocabulary.assign(cuis.begin(), cuis.end());
    }
    std::map<std::string, std::size_t> col_of;
    for (std::size_t j = 0; j < m.vocabulary.size(); ++j) col_of[m.vocabulary[j]] = j;
    std::map<std::int64_t, std::size_t> row_of;
    for (std::size_t i = 0; i < note_ids.size(); ++i) {
        if (!row_of.emplace(note_ids[i], i).second) {
            throw ShapeMismatch("build_feature_matrix: duplicate note id " +
                                std::to_string(note_ids[i]));
        }
    }
    m.counts.assign(note_ids.size(), std::vector<int>(m.vocabulary.size(), 0));
    for (const auto& a : annotations) {
        const auto row = row_of.find(a.note_id);
        if (row == row_of.end()) continue; // annotation outside the requested note set
        const auto col = col_of.find(a.cui);
        if (col == col_of.end()) continue; // unseen CUI under a fixed vocabulary
        ++m.counts[row->second][col->second];
    }
    return m;
}

} // namespace phenopipe::ml
