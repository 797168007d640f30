#pragma once

#include <Eigen/Dense>
#include <string>

namespace phenopipe::ml {

enum class Kernel { Linear, Rbf };

Kernel kernel_from_string(const std::string& s);
std::string kernel_to_string(Kernel k);

double kernel_eval(Kernel kernel, double gamma, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// One-vs-rest component: soft-margin SVM trained in the dual by
/// sequential minimal optimization (maximal-violating-pair selection),
/// stopping at KKT gap <= tol.
struct SvmBinary {
    Eigen::MatrixXd support_vectors; // one row per SV
    Eigen::VectorXd coef;            // alpha_i * y_i per SV
    double b = 0.0;
};

SvmBinary fit_svm_smo(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C, Kernel kernel,
                      double gamma, double tol = 1e-3, long max_iter = -1);

double svm_decision(const SvmBinary& model, Kernel kernel, double gamma, const Eigen::VectorXd& x);

} // namespace phenopipe::ml
