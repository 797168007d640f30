#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "phenopipe/rng.hpp"

namespace phenopipe::ml {

enum class Criterion { Gini, Entropy };

Criterion criterion_from_string(const std::string& s);
std::string criterion_to_string(Criterion c);

/// CART node. feature < 0 marks a leaf; otherwise rows with
/// x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_class = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;
    int predict(const Eigen::RowVectorXd& x) const;
};

struct TreeOptions {
    Criterion criterion = Criterion::Gini;
    /// When true, each split examines a random floor(sqrt(d)) feature
    /// subset (the forest setting); falls back to a full scan when the
    /// sampled features are all constant so growth can always continue.
    bool feature_subsample = false;
};

/// Grows an unpruned tree: nodes split until pure or unsplittable, ties in
/// split gain broken by lowest feature index then lowest threshold, leaf
/// majorities broken by lowest class index.
Tree build_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                const TreeOptions& options, Rng* rng = nullptr);

double impurity(const std::vector<long>& class_counts, long total, Criterion criterion);

} // namespace phenopipe::ml
