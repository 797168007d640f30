#include "phenopipe/ml/classifier.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"

namespace phenopipe::ml {

using nlohmann::json;

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "lr" || s == "LR") return Algorithm::LR;
    if (s == "svm" || s == "SVM") return Algorithm::SVM;
    if (s == "dt" || s == "DT") return Algorithm::DT;
    if (s == "rf" || s == "RF") return Algorithm::RF;
    throw Error("unknown algorithm: " + s);
}

std::string algorithm_to_string(Algorithm a) {
    switch (a) {
    case Algorithm::LR: return "lr";
    case Algorithm::SVM: return "svm";
    case Algorithm::DT: return "dt";
    case Algorithm::RF: return "rf";
    }
    return "?";
}

std::string Params::describe(Algorithm a) const {
    std::ostringstream out;
    switch (a) {
    case Algorithm::LR: out << "C=" << C; break;
    case Algorithm::SVM: out << "C=" << C << ",kernel=" << kernel; break;
    case Algorithm::DT: out << "criterion=" << criterion; break;
    case Algorithm::RF: out << "n_estimators=" << n_estimators << ",criterion=" << criterion; break;
    }
    return out.str();
}

Eigen::MatrixXd to_dense(const FeatureMatrix& X) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(X.rows()), static_cast<Eigen::Index>(X.cols()));
    for (std::size_t i = 0; i < X.rows(); ++i) {
        for (std::size_t j = 0; j < X.cols(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X.counts[i][j];
        }
    }
    return m;
}

Model train(Algorithm algorithm, const FeatureMatrix& X, const std::vector<std::string>& y,
            const Params& params, std::uint64_t seed) {
    if (X.rows() != y.size()) {
        throw ShapeMismatch("train: feature rows " + std::to_string(X.rows()) + " != labels " +
                            std::to_string(y.size()));
    }
    if (X.rows() < 2) throw ShapeMismatch("train: need at least 2 rows");
    const std::set<std::string> distinct(y.begin(), y.end());
    if (distinct.size() < 2) {
        throw DegenerateLabels("train: need at least 2 distinct labels, got " +
                               std::to_string(distinct.size()));
    }

    Model model;
    model.algorithm = algorithm;
    model.params = params;
    model.rng_seed = seed;
    model.vocabulary = X.vocabulary;
    model.class_labels.assign(distinct.begin(), distinct.end()); // sorted

    std::vector<int> y_idx(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y_idx[i] = static_cast<int>(std::lower_bound(model.class_labels.begin(),
                                                     model.class_labels.end(), y[i]) -
                                    model.class_labels.begin());
    }
    const int n_classes = static_cast<int>(model.class_labels.size());
    const Eigen::MatrixXd Xd = to_dense(X);

    switch (algorithm) {
    case Algorithm::LR: {
        for (int c = 0; c < n_classes; ++c) {
            Eigen::VectorXd yb(Xd.rows());
            for (Eigen::Index i = 0; i < Xd.rows(); ++i) {
                yb(i) = y_idx[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
            }
            model.lr_ovr.push_back(fit_logistic(Xd, yb, params.C));
        }
        break;
    }
    case Algorithm::SVM: {
        const Kernel kernel = kernel_from_string(params.kernel);
        model.svm_gamma = X.cols() > 0 ? 1.0 / static_cast<double>(X.cols()) : 1.0;
        for (int c = 0; c < n_classes; ++c) {
            Eigen::VectorXd yb(Xd.rows());
            for (Eigen::Index i = 0; i < Xd.rows(); ++i) {
                yb(i) = y_idx[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
            }
            model.svm_ovr.push_back(fit_svm_smo(Xd, yb, params.C, kernel, model.svm_gamma));
        }
        break;
    }
    case Algorithm::DT: {
        TreeOptions options{criterion_from_string(params.criterion), false};
        model.tree = build_tree(Xd, y_idx, n_classes, options, nullptr);
        break;
    }
    case Algorithm::RF: {
        ForestOptions options{criterion_from_string(params.criterion), params.n_estimators,
                              params.bootstrap, params.feature_subsample};
        model.forest = build_forest(Xd, y_idx, n_classes, options, seed);
        break;
    }
    }
    return model;
}

std::vector<std::vector<double>> Model::decision_scores(const FeatureMatrix& X) const {
    if (X.vocabulary != vocabulary) {
        throw VocabularyMismatch("predict: feature vocabulary differs from training vocabulary");
    }
    const Eigen::MatrixXd Xd = to_dense(X);
    const int n_classes = static_cast<int>(class_labels.size());
    std::vector<std::vector<double>> scores(X.rows(),
                                            std::vector<double>(static_cast<std::size_t>(n_classes)));
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const Eigen::RowVectorXd row = Xd.row(static_cast<Eigen::Index>(i));
        switch (algorithm) {
        case Algorithm::LR:
            for (int c = 0; c < n_classes; ++c) {
                const auto& m = lr_ovr[static_cast<std::size_t>(c)];
                scores[i][static_cast<std::size_t>(c)] = row.dot(m.w.transpose()) + m.b;
            }
            break;
        case Algorithm::SVM: {
            const Kernel kernel = kernel_from_string(params.kernel);
            for (int c = 0; c < n_classes; ++c) {
                scores[i][static_cast<std::size_t>(c)] =
                    svm_decision(svm_ovr[static_cast<std::size_t>(c)], kernel, svm_gamma,
                                 row.transpose());
            }
            break;
        }
        case Algorithm::DT: {
            const int cls = tree.predict(row);
            scores[i][static_cast<std::size_t>(cls)] = 1.0;
            break;
        }
        case Algorithm::RF: {
            const auto tally = forest.votes(row, n_classes);
            for (int c = 0; c < n_classes; ++c) {
                scores[i][static_cast<std::size_t>(c)] =
                    static_cast<double>(tally[static_cast<std::size_t>(c)]) /
                    static_cast<double>(forest.trees.size());
            }
            break;
        }
        }
    }
    return scores;
}

std::vector<std::string> Model::predict(const FeatureMatrix& X) const {
    const auto scores = decision_scores(X);
    std::vector<std::string> labels;
    labels.reserve(scores.size());
    for (const auto& row : scores) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (row[c] > row[best]) best = c; // ties keep the lowest class index
        }
        labels.push_back(class_labels[best]);
    }
    return labels;
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index cols_hint) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n > 0 ? static_cast<Eigen::Index>(rows[0].size()) : cols_hint);
    for (Eigen::Index i = 0; i < n; ++i) {
        m.row(i) = vector_from_json(rows[static_cast<std::size_t>(i)]).transpose();
    }
    return m;
}

json tree_to_json(const Tree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
        nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right},
                         {"c", n.leaf_class}});
    }
    return nodes;
}

Tree tree_from_json(const json& nodes) {
    Tree tree;
    for (const auto& n : nodes) {
        tree.nodes.push_back({n.at("f").get<int>(), n.at("t").get<double>(), n.at("l").get<int>(),
                              n.at("r").get<int>(), n.at("c").get<int>()});
    }
    return tree;
}

} // namespace

std::string Model::to_json() const {
    json doc;
    doc["format"] = "phenopipe-model";
    doc["version"] = 1;
    doc["algorithm"] = algorithm_to_string(algorithm);
    doc["class_labels"] = class_labels;
    doc["vocabulary"] = vocabulary;
    doc["rng_seed"] = rng_seed;
    doc["params"] = {{"C", params.C}, {"kernel", params.kernel}, {"criterion", params.criterion},
                     {"n_estimators", params.n_estimators}, {"bootstrap", params.bootstrap},
                     {"feature_subsample", params.feature_subsample}};
    switch (algorithm) {
    case Algorithm::LR: {
        json ovr = json::array();
        for (const auto& m : lr_ovr) ovr.push_back({{"w", vector_to_json(m.w)}, {"b", m.b}});
        doc["state"] = {{"ovr", ovr}};
        break;
    }
    case Algorithm::SVM: {
        json ovr = json::array();
        for (const auto& m : svm_ovr) {
            ovr.push_back({{"sv", matrix_to_json(m.support_vectors)},
                           {"coef", vector_to_json(m.coef)}, {"b", m.b}});
        }
        doc["state"] = {{"ovr", ovr}, {"gamma", svm_gamma}};
        break;
    }
    case Algorithm::DT:
        doc["state"] = {{"tree", tree_to_json(tree)}};
        break;
    case Algorithm::RF: {
        json trees = json::array();
        for (const auto& t : forest.trees) trees.push_back(tree_to_json(t));
        doc["state"] = {{"trees", trees}};
        break;
    }
    }
    return doc.dump(2);
}

Model Model::from_json(const std::string& text) {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "phenopipe-model") {
        throw Error("model file: unexpected format tag");
    }
    if (doc.at("version").get<int>() != 1) {
        throw Error("model file: unsupported version " + doc.at("version").dump());
    }
    Model model;
    model.algorithm = algorithm_from_string(doc.at("algorithm").get<std::string>());
    model.class_labels = doc.at("class_labels").get<std::vector<std::string>>();
    model.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
    model.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
    const json& p = doc.at("params");
    model.params.C = p.at("C").get<double>();
    model.params.kernel = p.at("kernel").get<std::string>();
    model.params.criterion = p.at("criterion").get<std::string>();
    model.params.n_estimators = p.at("n_estimators").get<int>();
    model.params.bootstrap = p.at("bootstrap").get<bool>();
    model.params.feature_subsample = p.at("feature_subsample").get<bool>();
    const json& state = doc.at("state");
    const auto cols = static_cast<Eigen::Index>(model.vocabulary.size());
    switch (model.algorithm) {
    case Algorithm::LR:
        for (const auto& m : state.at("ovr")) {
            model.lr_ovr.push_back({vector_from_json(m.at("w")), m.at("b").get<double>()});
        }
        break;
    case Algorithm::SVM:
        model.svm_gamma = state.at("gamma").get<double>();
        for (const auto& m : state.at("ovr")) {
            model.svm_ovr.push_back({matrix_from_json(m.at("sv"), cols),
                                     vector_from_json(m.at("coef")), m.at("b").get<double>()});
        }
        break;
    case Algorithm::DT:
        model.tree = tree_from_json(state.at("tree"));
        break;
    case Algorithm::RF:
        for (const auto& t : state.at("trees")) model.forest.trees.push_back(tree_from_json(t));
        break;
    }
    return model;
}

void Model::save(const std::string& path) const { csv::write_text_file(path, to_json()); }

Model Model::load(const std::string& path) {
    return from_json(csv::read_text_file(path));
}

} // namespace phenopipe::ml
