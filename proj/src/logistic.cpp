#include "phenopipe/ml/logistic.hpp"

#include <cmath>

#include "phenopipe/errors.hpp"

namespace phenopipe::ml {

namespace {

// log(1 + exp(-m)) without overflow for large |m|
double log1p_exp_neg(double m) {
    if (m > 0) return std::log1p(std::exp(-m));
    return -m + std::log1p(std::exp(m));
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

double logistic_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w, double b, double C) {
    const Eigen::VectorXd margins = y.array() * ((X * w).array() + b);
    double loss = w.squaredNorm() / (2.0 * C);
    for (Eigen::Index i = 0; i < margins.size(); ++i) loss += log1p_exp_neg(margins(i));
    return loss;
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w, double b, double C) {
    const Eigen::Index n = X.rows(), d = X.cols();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(d + 1);
    grad.head(d) = w / C;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double z = X.row(i).dot(w) + b;
        const double coeff = -y(i) * sigmoid(-y(i) * z);
        grad.head(d) += coeff * X.row(i).transpose();
        grad(d) += coeff;
    }
    return grad;
}

LogisticBinary fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C,
                            double tol, int max_iter) {
    if (X.rows() != y.size()) throw ShapeMismatch("fit_logistic: rows(X) != |y|");
    const Eigen::Index n = X.rows(), d = X.cols();

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    double b = 0.0;
    double loss = logistic_loss(X, y, w, b, C);

    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::VectorXd grad = logistic_gradient(X, y, w, b, C);
        if (grad.lpNorm<Eigen::Infinity>() <= tol) break;

        // Newton direction on the augmented design [X 1]; the L2 term keeps
        // the Hessian positive definite for the w block.
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d + 1, d + 1);
        for (Eigen::Index j = 0; j < d; ++j) H(j, j) = 1.0 / C;
        H(d, d) = 1e-10; // tiny ridge so the intercept row stays invertible
        for (Eigen::Index i = 0; i < n; ++i) {
            const double z = X.row(i).dot(w) + b;
            const double s = sigmoid(z);
            const double weight = s * (1.0 - s);
            if (weight <= 0) continue;
            Eigen::VectorXd xi(d + 1);
            xi.head(d) = X.row(i).transpose();
            xi(d) = 1.0;
            H.noalias() += weight * xi * xi.transpose();
        }
        const Eigen::VectorXd step = H.ldlt().solve(-grad);

        // backtracking keeps each iteration a descent step
        double scale = 1.0;
        for (int halving = 0; halving < 60; ++halving) {
            const Eigen::VectorXd w_try = w + scale * step.head(d);
            const double b_try = b + scale * step(d);
            const double loss_try = logistic_loss(X, y, w_try, b_try, C);
            if (loss_try <= loss) {
                w = w_try;
                b = b_try;
                loss = loss_try;
                break;
            }
            scale *= 0.5;
        }
    }
    return {w, b};
}

} // namespace phenopipe::ml
