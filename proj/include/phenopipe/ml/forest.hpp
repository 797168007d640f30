#pragma once

#include <Eigen/Dense>
#include <vector>

#include "phenopipe/ml/tree.hpp"
#include "phenopipe/rng.hpp"

namespace phenopipe::ml {

struct ForestOptions {
    Criterion criterion = Criterion::Gini;
    int n_estimators = 10;
    bool bootstrap = true;
    bool feature_subsample = true;
};

/// Bagged CART trees; per-tree streams are derived from the forest seed so
/// training is reproducible tree by tree.
struct Forest {
    std::vector<Tree> trees;

    /// Majority vote, ties to the lowest class index.
    int predict(const Eigen::RowVectorXd& x, int n_classes) const;
    std::vector<long> votes(const Eigen::RowVectorXd& x, int n_classes) const;
};

Forest build_forest(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                    const ForestOptions& options, std::uint64_t seed);

} // namespace phenopipe::ml
