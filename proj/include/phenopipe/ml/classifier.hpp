#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phenopipe/ml/features.hpp"
#include "phenopipe/ml/forest.hpp"
#include "phenopipe/ml/logistic.hpp"
#include "phenopipe/ml/svm.hpp"
#include "phenopipe/ml/tree.hpp"

namespace phenopipe::ml {

enum class Algorithm { LR, SVM, DT, RF };

Algorithm algorithm_from_string(const std::string& s);
std::string algorithm_to_string(Algorithm a);

/// Hyperparameters across the four algorithms; each algorithm reads only
/// its own fields.
struct Params {
    double C = 1.0;                 // LR, SVM
    std::string kernel = "linear";  // SVM
    std::string criterion = "gini"; // DT, RF
    int n_estimators = 10;          // RF
    bool bootstrap = true;          // RF
    bool feature_subsample = true;  // RF

    std::string describe(Algorithm a) const;
    bool operator==(const Params&) const = default;
};

/// A fitted multi-class model. class_labels is the fixed (sorted) label
/// ordering; ties anywhere break toward the lowest index in it.
class Model {
public:
    Algorithm algorithm = Algorithm::DT;
    std::vector<std::string> class_labels;
    std::vector<std::string> vocabulary;
    Params params;
    std::uint64_t rng_seed = 0;

    // fitted state, one of:
    std::vector<LogisticBinary> lr_ovr;
    std::vector<SvmBinary> svm_ovr;
    double svm_gamma = 0.0;
    Tree tree;
    Forest forest;

    std::vector<std::string> predict(const FeatureMatrix& X) const;

    /// Per-class decision values: raw one-vs-rest scores for LR/SVM, vote
    /// shares for RF, a one-hot indicator for DT. predict() is the argmax.
    std::vector<std::vector<double>> decision_scores(const FeatureMatrix& X) const;

    std::string to_json() const;
    static Model from_json(const std::string& text);
    void save(const std::string& path) const;
    static Model load(const std::string& path);
};

Model train(Algorithm algorithm, const FeatureMatrix& X, const std::vector<std::string>& y,
            const Params& params, std::uint64_t seed);

Eigen::MatrixXd to_dense(const FeatureMatrix& X);

} // namespace phenopipe::ml
