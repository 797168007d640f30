#pragma once

#include <Eigen/Dense>

namespace phenopipe::ml {

/// One-vs-rest component: L2-regularized binary logistic regression.
/// Minimizes  ||w||^2 / (2C) + sum_i log(1 + exp(-y_i (w.x_i + b)))
/// for labels y in {+1, -1}; the intercept is not penalized.
struct LogisticBinary {
    Eigen::VectorXd w;
    double b = 0.0;
};

double logistic_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w, double b, double C);

/// Analytic gradient of the loss above; grad has w components first, the
/// intercept component last.
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w, double b, double C);

/// Damped Newton iteration, stopping at max-norm gradient tolerance `tol`
/// or `max_iter` iterations.
LogisticBinary fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C,
                            double tol = 1e-6, int max_iter = 1000);

} // namespace phenopipe::ml
