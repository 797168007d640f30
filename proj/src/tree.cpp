#include "phenopipe/ml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "phenopipe/errors.hpp"

namespace phenopipe::ml {

Criterion criterion_from_string(const std::string& s) {
    if (s == "gini") return Criterion::Gini;
    if (s == "entropy") return Criterion::Entropy;
    throw Error("unknown criterion: " + s);
}

std::string criterion_to_string(Criterion c) {
    return c == Criterion::Gini ? "gini" : "entropy";
}

int Tree::predict(const Eigen::RowVectorXd& x) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        node = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].leaf_class;
}

double impurity(const std::vector<long>& class_counts, long total, Criterion criterion) {
    if (total == 0) return 0.0;
    double value = criterion == Criterion::Gini ? 1.0 : 0.0;
    for (long c : class_counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        if (criterion == Criterion::Gini) value -= p * p;
        else value -= p * std::log2(p);
    }
    return value;
}

namespace {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
};

struct Builder {
    const Eigen::MatrixXd& X;
    const std::vector<int>& y;
    int n_classes;
    const TreeOptions& options;
    Rng* rng;
    std::vector<TreeNode> nodes;

    int majority_class(const std::vector<long>& counts) const {
        int best = 0;
        for (int c = 1; c < n_classes; ++c) {
            if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
        }
        return best; // first max wins: lowest class index on ties
    }

    /// Best split over `features` for the rows in `idx`; gain measured in
    /// sample proportions so it is invariant under row duplication.
    SplitChoice best_split_over(const std::vector<std::size_t>& idx,
                                const std::vector<int>& features,
                                const std::vector<long>& parent_counts) const {
        SplitChoice best;
        const long total = static_cast<long>(idx.size());
        const double parent_impurity = impurity(parent_counts, total, options.criterion);

        std::vector<std::size_t> order;
        std::vector<long> left_counts(static_cast<std::size_t>(n_classes));
        for (int f : features) {
            order = idx;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = X(static_cast<Eigen::Index>(a), f);
                const double vb = X(static_cast<Eigen::Index>(b), f);
                if (va != vb) return va < vb;
                return a < b;
            });
            std::fill(left_counts.begin(), left_counts.end(), 0);
            long n_left = 0;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                ++left_counts[static_cast<std::size_t>(y[order[k]])];
                ++n_left;
                const double v = X(static_cast<Eigen::Index>(order[k]), f);
                const double v_next = X(static_cast<Eigen::Index>(order[k + 1]), f);
                if (v == v_next) continue;
                double threshold = v + (v_next - v) / 2.0;
                // midpoints between adjacent doubles can round up; keep the
                // partition non-empty on both sides
                if (!(threshold < v_next)) threshold = v;
                const long n_right = total - n_left;
                double left_imp = impurity(left_counts, n_left, options.criterion);
                std::vector<long> right_counts(static_cast<std::size_t>(n_classes));
                for (int c = 0; c < n_classes; ++c) {
                    right_counts[static_cast<std::size_t>(c)] =
                        parent_counts[static_cast<std::size_t>(c)] -
                        left_counts[static_cast<std::size_t>(c)];
                }
                const double right_imp = impurity(right_counts, n_right, options.criterion);
                const double gain = parent_impurity -
                                    (static_cast<double>(n_left) / total) * left_imp -
                                    (static_cast<double>(n_right) / total) * right_imp;
                // strict improvement keeps the first-encountered split on
                // ties: lowest feature index, then lowest threshold
                if (gain > best.gain + 1e-12) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = threshold;
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    SplitChoice choose_split(const std::vector<std::size_t>& idx,
                             const std::vector<long>& parent_counts) const {
        const int d = static_cast<int>(X.cols());
        std::vector<int> features(static_cast<std::size_t>(d));
        std::iota(features.begin(), features.end(), 0);
        if (options.feature_subsample && rng) {
            const int k = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
            // partial Fisher-Yates, then ascending order so tie-breaking by
            // feature index is preserved within the sample
            for (int i = 0; i < k; ++i) {
                const auto j = i + static_cast<int>(rng->uniform(static_cast<std::uint64_t>(d - i)));
                std::swap(features[static_cast<std::size_t>(i)], features[static_cast<std::size_t>(j)]);
            }
            features.resize(static_cast<std::size_t>(k));
            std::sort(features.begin(), features.end());
            SplitChoice sampled = best_split_over(idx, features, parent_counts);
            if (sampled.found) return sampled;
            // all sampled features constant: scan everything
            features.resize(static_cast<std::size_t>(d));
            std::iota(features.begin(), features.end(), 0);
        }
        return best_split_over(idx, features, parent_counts);
    }

    int build(std::vector<std::size_t> idx) {
        std::vector<long> counts(static_cast<std::size_t>(n_classes));
        for (std::size_t i : idx) ++counts[static_cast<std::size_t>(y[i])];
        const long present_classes =
            std::count_if(counts.begin(), counts.end(), [](long c) { return c > 0; });

        const int node_index = static_cast<int>(nodes.size());
        nodes.emplace_back();

        SplitChoice split;
        if (present_classes > 1 && idx.size() >= 2) split = choose_split(idx, counts);
        if (!split.found) {
            nodes[static_cast<std::size_t>(node_index)].leaf_class = majority_class(counts);
            return node_index;
        }

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (X(static_cast<Eigen::Index>(i), split.feature) <= split.threshold) {
                left_idx.push_back(i);
            } else {
                right_idx.push_back(i);
            }
        }
        idx.clear();
        idx.shrink_to_fit();
        const int left = build(std::move(left_idx));
        const int right = build(std::move(right_idx));
        TreeNode& node = nodes[static_cast<std::size_t>(node_index)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left;
        node.right = right;
        return node_index;
    }
};

} // namespace

Tree build_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                const TreeOptions& options, Rng* rng) {
    if (static_cast<std::size_t>(X.rows()) != y.size()) {
        throw ShapeMismatch("build_tree: rows(X) != |y|");
    }
    if (X.rows() == 0) throw ShapeMismatch("build_tree: empty data");
    Builder builder{X, y, n_classes, options, rng, {}};
    std::vector<std::size_t> idx(static_cast<std::size_t>(X.rows()));
    std::iota(idx.begin(), idx.end(), 0);
    builder.build(std::move(idx));
    Tree tree;
    tree.nodes = std::move(builder.nodes);
    return tree;
}

} // namespace phenopipe::ml
