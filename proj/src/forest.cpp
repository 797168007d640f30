#include "phenopipe/ml/forest.hpp"

#include "phenopipe/errors.hpp"

namespace phenopipe::ml {

std::vector<long> Forest::votes(const Eigen::RowVectorXd& x, int n_classes) const {
    std::vector<long> tally(static_cast<std::size_t>(n_classes), 0);
    for (const auto& tree : trees) ++tally[static_cast<std::size_t>(tree.predict(x))];
    return tally;
}

int Forest::predict(const Eigen::RowVectorXd& x, int n_classes) const {
    const auto tally = votes(x, n_classes);
    int best = 0;
    for (int c = 1; c < n_classes; ++c) {
        if (tally[static_cast<std::size_t>(c)] > tally[static_cast<std::size_t>(best)]) best = c;
    }
    return best;
}

Forest build_forest(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                    const ForestOptions& options, std::uint64_t seed) {
    if (options.n_estimators < 1) throw Error("build_forest: n_estimators must be >= 1");
    const Eigen::Index n = X.rows();
    Forest forest;
    forest.trees.reserve(static_cast<std::size_t>(options.n_estimators));
    Rng root(seed);
    for (int t = 0; t < options.n_estimators; ++t) {
        Rng tree_rng = root.spawn(static_cast<std::uint64_t>(t));
        Eigen::MatrixXd Xb;
        std::vector<int> yb;
        if (options.bootstrap) {
            Xb.resize(n, X.cols());
            yb.resize(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto pick = static_cast<Eigen::Index>(tree_rng.uniform(static_cast<std::uint64_t>(n)));
                Xb.row(i) = X.row(pick);
                yb[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(pick)];
            }
        } else {
            Xb = X;
            yb = y;
        }
        TreeOptions tree_options{options.criterion, options.feature_subsample};
        forest.trees.push_back(build_tree(Xb, yb, n_classes, tree_options, &tree_rng));
    }
    return forest;
}

} // namespace phenopipe::ml
