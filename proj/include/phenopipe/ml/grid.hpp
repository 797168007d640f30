#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phenopipe/ml/classifier.hpp"

namespace phenopipe::ml {

/// Hyperparameter grid; defaults() gives the standard per-algorithm grids
/// (LR: 5 C values; SVM: 5 C x 2 kernels; DT: 2 criteria;
/// RF: 6 estimator counts x 2 criteria).
struct ParamGrid {
    Algorithm algorithm = Algorithm::DT;
    std::vector<double> C_values;
    std::vector<std::string> kernels;
    std::vector<std::string> criteria;
    std::vector<int> n_estimators_values;

    static ParamGrid defaults(Algorithm algorithm);

    /// Row-major: the first-listed axis varies slowest.
    std::vector<Params> enumerate() const;

    std::string to_json() const;
    static ParamGrid from_json(const std::string& text, Algorithm algorithm);
};

/// Deterministic stratified fold assignment: per class, indices are
/// shuffled with the seeded generator and dealt round-robin.
std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<std::string>& y, int k,
                                                       std::uint64_t seed);

/// Seeded stratified train/test split. Classes with a single member go to
/// the training side.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
SplitIndices stratified_split(const std::vector<std::string>& y, double test_fraction,
                              std::uint64_t seed);

struct GridSearchResult {
    Params best_params;
    std::vector<std::pair<Params, double>> cv_scores; // enumeration order
    int folds_used = 0;
    bool folds_reduced = false;
};

/// 3-fold (by default) cross-validated accuracy sweep; the winner is the
/// first combination in enumeration order reaching the maximal mean score.
/// When the smallest class has fewer members than `folds`, the fold count
/// drops to that size (floor 2) with a warning on stderr.
GridSearchResult grid_search(Algorithm algorithm, const FeatureMatrix& X,
                             const std::vector<std::string>& y, const ParamGrid& grid,
                             int folds, std::uint64_t seed);

double accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& pred);

} // namespace phenopipe::ml
