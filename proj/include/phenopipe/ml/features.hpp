#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phenopipe/concepts.hpp"

namespace phenopipe::ml {

/// CUI-frequency features: counts[i][j] = occurrences of vocabulary[j]
/// among the annotations of note row_ids[i].
struct FeatureMatrix {
    std::vector<std::int64_t> row_ids;
    std::vector<std::string> vocabulary;
    std::vector<std::vector<int>> counts;

    std::size_t rows() const { return row_ids.size(); }
    std::size_t cols() const { return vocabulary.size(); }
    long total() const;

    /// Row subset preserving vocabulary; `indices` are row positions.
    FeatureMatrix select_rows(const std::vector<std::size_t>& indices) const;
};

/// Builds the matrix over `note_ids` (one row each, zero row when a note
/// has no annotations). Without a fixed vocabulary the sorted set of
/// observed CUIs is used; with one, unseen CUIs are dropped and missing
/// ones become zero columns.
FeatureMatrix build_feature_matrix(const std::vector<std::int64_t>& note_ids,
                                   const ConceptAnnotations& annotations,
                                   const std::optional<std::vector<std::string>>& vocabulary = {});

} // namespace phenopipe::ml
