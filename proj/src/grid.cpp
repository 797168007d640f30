#include "phenopipe/ml/grid.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "phenopipe/errors.hpp"
#include "phenopipe/rng.hpp"

namespace phenopipe::ml {

using nlohmann::json;

ParamGrid ParamGrid::defaults(Algorithm algorithm) {
    ParamGrid grid;
    grid.algorithm = algorithm;
    switch (algorithm) {
    case Algorithm::LR:
        grid.C_values = {0.01, 0.1, 1, 10, 100};
        break;
    case Algorithm::SVM:
        grid.C_values = {0.01, 0.1, 1, 10, 100};
        grid.kernels = {"linear", "rbf"};
        break;
    case Algorithm::DT:
        grid.criteria = {"gini", "entropy"};
        break;
    case Algorithm::RF:
        grid.n_estimators_values = {5, 10, 30, 50, 80, 100};
        grid.criteria = {"gini", "entropy"};
        break;
    }
    return grid;
}

std::vector<Params> ParamGrid::enumerate() const {
    std::vector<Params> combos;
    switch (algorithm) {
    case Algorithm::LR:
        for (double c : C_values) {
            Params p;
            p.C = c;
            combos.push_back(p);
        }
        break;
    case Algorithm::SVM:
        for (double c : C_values) {
            for (const auto& kernel : kernels) {
                Params p;
                p.C = c;
                p.kernel = kernel;
                combos.push_back(p);
            }
        }
        break;
    case Algorithm::DT:
        for (const auto& criterion : criteria) {
            Params p;
            p.criterion = criterion;
            combos.push_back(p);
        }
        break;
    case Algorithm::RF:
        for (int n : n_estimators_values) {
            for (const auto& criterion : criteria) {
                Params p;
                p.n_estimators = n;
                p.criterion = criterion;
                combos.push_back(p);
            }
        }
        break;
    }
    if (combos.empty()) throw Error("empty parameter grid");
    return combos;
}

std::string ParamGrid::to_json() const {
    json doc;
    doc["algorithm"] = algorithm_to_string(algorithm);
    if (!C_values.empty()) doc["C"] = C_values;
    if (!kernels.empty()) doc["kernel"] = kernels;
    if (!criteria.empty()) doc["criterion"] = criteria;
    if (!n_estimators_values.empty()) doc["n_estimators"] = n_estimators_values;
    return doc.dump(2);
}

ParamGrid ParamGrid::from_json(const std::string& text, Algorithm algorithm) {
    const json doc = json::parse(text);
    ParamGrid grid = defaults(algorithm);
    if (doc.contains("algorithm")) {
        const Algorithm declared = algorithm_from_string(doc.at("algorithm").get<std::string>());
        if (declared != algorithm) throw Error("grid file algorithm does not match requested one");
    }
    if (doc.contains("C")) grid.C_values = doc.at("C").get<std::vector<double>>();
    if (doc.contains("kernel")) grid.kernels = doc.at("kernel").get<std::vector<std::string>>();
    if (doc.contains("criterion")) grid.criteria = doc.at("criterion").get<std::vector<std::string>>();
    if (doc.contains("n_estimators")) {
        grid.n_estimators_values = doc.at("n_estimators").get<std::vector<int>>();
    }
    return grid;
}

namespace {

/// Class -> member indices (ascending), classes in sorted label order.
std::map<std::string, std::vector<std::size_t>> by_class(const std::vector<std::string>& y) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < y.size(); ++i) groups[y[i]].push_back(i);
    return groups;
}

void shuffle_indices(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<std::string>& y, int k,
                                                       std::uint64_t seed) {
    if (k < 2) throw Error("stratified_folds: need k >= 2");
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    Rng rng(seed);
    std::size_t class_index = 0;
    for (auto& [label, members] : by_class(y)) {
        Rng class_rng = rng.spawn(class_index++);
        shuffle_indices(members, class_rng);
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            folds[pos % static_cast<std::size_t>(k)].push_back(members[pos]);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

SplitIndices stratified_split(const std::vector<std::string>& y, double test_fraction,
                              std::uint64_t seed) {
    if (test_fraction <= 0.0 || test_fraction >= 1.0) {
        throw Error("stratified_split: test fraction must be in (0, 1)");
    }
    SplitIndices split;
    Rng rng(seed);
    std::size_t class_index = 0;
    for (auto& [label, members] : by_class(y)) {
        Rng class_rng = rng.spawn(class_index++);
        shuffle_indices(members, class_rng);
        std::size_t n_test =
            static_cast<std::size_t>(test_fraction * static_cast<double>(members.size()) + 0.5);
        if (members.size() < 2) n_test = 0;       // singletons train
        else if (n_test >= members.size()) n_test = members.size() - 1;
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            (pos < n_test ? split.test : split.train).push_back(members[pos]);
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

double accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
    if (gold.size() != pred.size() || gold.empty()) {
        throw ShapeMismatch("accuracy: size mismatch or empty");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) hits += gold[i] == pred[i];
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

GridSearchResult grid_search(Algorithm algorithm, const FeatureMatrix& X,
                             const std::vector<std::string>& y, const ParamGrid& grid,
                             int folds, std::uint64_t seed) {
    if (X.rows() != y.size()) throw ShapeMismatch("grid_search: rows(X) != |y|");
    const auto groups = by_class(y);
    if (groups.size() < 2) throw DegenerateLabels("grid_search: need at least 2 classes");
    std::size_t min_class = y.size();
    for (const auto& [label, members] : groups) min_class = std::min(min_class, members.size());

    GridSearchResult result;
    int k = folds;
    if (min_class < static_cast<std::size_t>(folds)) {
        k = std::max(2, static_cast<int>(min_class));
        result.folds_reduced = true;
        std::cerr << "grid_search: smallest class has " << min_class
                  << " members; reducing folds from " << folds << " to " << k << "\n";
    }
    result.folds_used = k;

    const auto fold_sets = stratified_folds(y, k, seed);
    struct FoldData {
        FeatureMatrix X_train, X_test;
        std::vector<std::string> y_train, y_test;
    };
    std::vector<FoldData> prepared;
    for (int f = 0; f < k; ++f) {
        FoldData data;
        std::vector<std::size_t> train_idx;
        for (int g = 0; g < k; ++g) {
            if (g == f) continue;
            train_idx.insert(train_idx.end(), fold_sets[static_cast<std::size_t>(g)].begin(),
                             fold_sets[static_cast<std::size_t>(g)].end());
        }
        std::sort(train_idx.begin(), train_idx.end());
        data.X_train = X.select_rows(train_idx);
        data.X_test = X.select_rows(fold_sets[static_cast<std::size_t>(f)]);
        for (std::size_t i : train_idx) data.y_train.push_back(y[i]);
        for (std::size_t i : fold_sets[static_cast<std::size_t>(f)]) data.y_test.push_back(y[i]);
        prepared.push_back(std::move(data));
    }

    double best_score = -1.0;
    for (const Params& params : grid.enumerate()) {
        double mean_score = 0.0;
        for (const auto& fold : prepared) {
            const Model model = train(algorithm, fold.X_train, fold.y_train, params, seed);
            mean_score += accuracy(fold.y_test, model.predict(fold.X_test));
        }
        mean_score /= static_cast<double>(prepared.size());
        result.cv_scores.emplace_back(params, mean_score);
        if (mean_score > best_score) { // strict: first max in enumeration order wins
            best_score = mean_score;
            result.best_params = params;
        }
    }
    return result;
}

} // namespace phenopipe::ml
