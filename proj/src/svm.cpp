#include "phenopipe/ml/svm.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "phenopipe/errors.hpp"

namespace phenopipe::ml {

Kernel kernel_from_string(const std::string& s) {
    if (s == "linear") return Kernel::Linear;
    if (s == "rbf") return Kernel::Rbf;
    throw Error("unknown kernel: " + s);
}

std::string kernel_to_string(Kernel k) {
    return k == Kernel::Linear ? "linear" : "rbf";
}

double kernel_eval(Kernel kernel, double gamma, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (kernel == Kernel::Linear) return a.dot(b);
    return std::exp(-gamma * (a - b).squaredNorm());
}

SvmBinary fit_svm_smo(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C, Kernel kernel,
                      double gamma, double tol, long max_iter) {
    const Eigen::Index n = X.rows();
    if (n != y.size()) throw ShapeMismatch("fit_svm_smo: rows(X) != |y|");
    if (max_iter < 0) max_iter = std::max<long>(100000, 1000L * n);

    // full kernel matrix; training sets here are desk scale
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            K(i, j) = K(j, i) = kernel_eval(kernel, gamma, X.row(i), X.row(j));
        }
    }

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    // E_t = F_t - y_t where F_t is the decision value without the bias
    Eigen::VectorXd E = -y;

    // A feasible bias must satisfy b >= -E_t on the lower set and
    // b <= -E_t on the upper set; the working pair is the most violating one.
    auto in_lower = [&](Eigen::Index t) {
        return (y(t) > 0 && alpha(t) < C) || (y(t) < 0 && alpha(t) > 0);
    };
    auto in_upper = [&](Eigen::Index t) {
        return (y(t) < 0 && alpha(t) < C) || (y(t) > 0 && alpha(t) > 0);
    };

    for (long iter = 0; iter < max_iter; ++iter) {
        Eigen::Index i = -1, j = -1;
        double e_min = std::numeric_limits<double>::infinity();
        double e_max = -std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            if (in_lower(t) && E(t) < e_min) { e_min = E(t); i = t; }
            if (in_upper(t) && E(t) > e_max) { e_max = E(t); j = t; }
        }
        if (i < 0 || j < 0 || e_max - e_min <= tol) break;

        const double s = y(i) * y(j);
        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, alpha(j) - alpha(i));
            hi = std::min(C, C + alpha(j) - alpha(i));
        } else {
            lo = std::max(0.0, alpha(i) + alpha(j) - C);
            hi = std::min(C, alpha(i) + alpha(j));
        }
        const double eta = std::max(K(i, i) + K(j, j) - 2.0 * K(i, j), 1e-12);
        double aj = alpha(j) + y(j) * (E(i) - E(j)) / eta;
        aj = std::min(hi, std::max(lo, aj));
        const double ai = alpha(i) + s * (alpha(j) - aj);

        const double dai = ai - alpha(i);
        const double daj = aj - alpha(j);
        if (std::abs(daj) < 1e-14 && std::abs(dai) < 1e-14) break; // numerically stuck
        alpha(i) = ai;
        alpha(j) = aj;
        E.noalias() += dai * y(i) * K.col(i) + daj * y(j) * K.col(j);
    }

    // bias from free support vectors when any exist, else the KKT midpoint
    double b = 0.0;
    int free_count = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (alpha(t) > 1e-12 && alpha(t) < C - 1e-12) {
            b += -E(t);
            ++free_count;
        }
    }
    if (free_count > 0) {
        b /= free_count;
    } else {
        double lo_bound = -std::numeric_limits<double>::infinity();
        double hi_bound = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            if (in_lower(t)) lo_bound = std::max(lo_bound, -E(t));
            if (in_upper(t)) hi_bound = std::min(hi_bound, -E(t));
        }
        if (std::isfinite(lo_bound) && std::isfinite(hi_bound)) b = (lo_bound + hi_bound) / 2.0;
    }

    SvmBinary model;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (alpha(t) > 1e-12) sv.push_back(t);
    }
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    model.coef.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
        model.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(sv[k]);
        model.coef(static_cast<Eigen::Index>(k)) = alpha(sv[k]) * y(sv[k]);
    }
    model.b = b;
    return model;
}

double svm_decision(const SvmBinary& model, Kernel kernel, double gamma, const Eigen::VectorXd& x) {
    double value = model.b;
    for (Eigen::Index k = 0; k < model.coef.size(); ++k) {
        value += model.coef(k) * kernel_eval(kernel, gamma, model.support_vectors.row(k), x);
    }
    return value;
}

} // namespace phenopipe::ml
