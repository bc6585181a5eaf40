#pragma once

#include <Eigen/Core>

#include "selectica/interval.hpp"
#include "selectica/rng.hpp"
#include "selectica/selection.hpp"

namespace selectica {

// Solution of ||Y - X beta||^2 + lambda ||beta||_1 (un-halved quadratic, so
// the soft threshold acts at lambda/2).
struct LassoFit {
    Eigen::VectorXd beta;
    double lambda;
    int iterations;   // full coordinate sweeps
    bool converged;
};

// Decomposition of Y into independent Gaussian parts: y_train = Y + c*zeta
// and y_test = Y - zeta/c, with Var(y_train_i) = (1+c^2)sigma^2 and
// Var(y_test_i) = (1+1/c^2)sigma^2.
struct ThinnedPair {
    Eigen::VectorXd y_train;
    Eigen::VectorXd y_test;
    Eigen::VectorXd zeta;
    double c;
};

// Cyclic coordinate descent on the Gram form; converged when the largest
// coordinate change in a sweep falls below 1e-8 (cap 10000 sweeps).
LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, double lambda);

// Grid of `grid_size` log-spaced lambdas on [lambda_max*1e-3, lambda_max],
// lambda_max = 2||X'Y||_inf; returns the grid point minimizing mean held-out
// squared error over `folds` contiguous blocks of a seeded row permutation.
double cv_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, int folds,
                 int grid_size, RngStream& stream);

ThinnedPair thin(const Eigen::VectorXd& Y, double c, double sigma, RngStream& stream);

// OLS interval on y_test over the selected columns for the top-magnitude
// coefficient: beta_1 +- z_{1-alpha/2} sqrt(sigma^2 (1+1/c^2) [(X_S'X_S)^-1]_11.
Interval dt_interval(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                     const SelectionOutcome& out, double c, double alpha,
                     double sigma);

}  // namespace selectica
