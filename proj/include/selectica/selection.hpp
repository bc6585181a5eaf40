#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "selectica/rng.hpp"

namespace selectica {

// The conditioning record C(Y) of a randomized selection: what was selected,
// the realized noise, and the sign datum the downstream pivot conditions on.
struct SelectionOutcome {
    std::vector<int> selected;   // zero-based; ordered when the rule ranks
    Eigen::VectorXd zeta;        // realized noise (length n or p by rule)
    std::vector<int> delta;      // +-1 per coordinate (winner's curse),
                                 // single +-1 (maximal contrast), empty (lasso)

    int index() const { return selected.front(); }
};

// Smallest index attaining the maximum (deterministic tie-break).
int argmax_select(const Eigen::VectorXd& v);

// argmax_i (Y_i + zeta_i) with zeta ~ Laplace(c)^n; records zeta and
// delta_i = sign(zeta_i).  Exact-zero draws are resampled.
SelectionOutcome select_v1(const Eigen::VectorXd& Y, double c, RngStream& stream);

// argmax_j |X_j'Y + zeta_j| with zeta ~ Laplace(c)^p over a unit-column
// design; records the scalar delta = sign(X_j*'Y + zeta_j*).
SelectionOutcome select_v2(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                           double c, RngStream& stream);

// Lasso selection on the noise-augmented response Y + c*zeta with
// zeta ~ N(0, sigma^2)^n; lambda by cross-validation unless forced.  Returns
// the nonzero coefficients ordered by decreasing magnitude.  Throws
// EmptySelection when the fit is identically zero.
SelectionOutcome select_v3(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                           double c, double sigma, RngStream& stream,
                           int cv_folds = 3,
                           std::optional<double> forced_lambda = std::nullopt);

}  // namespace selectica
