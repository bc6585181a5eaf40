#pragma once

#include <Eigen/Core>
#include <optional>

#include "selectica/interval.hpp"
#include "selectica/selection.hpp"
#include "selectica/stat_core.hpp"

namespace selectica {

// The affine description of the selection event |X_j*'y + zeta_j*| maximal:
// A has 2p-1 rows (one top row, then identity/negated blocks around the
// selected column), delta is the realized sign, W the residual of Y off the
// selected column.
struct PolyhedralEvent {
    Eigen::MatrixXd A;
    int delta;
    Eigen::VectorXd zeta;
    Eigen::VectorXd W;
    int j_star;  // zero-based
};

struct TruncationLimits {
    double v_min;
    double v_max;
};

// Same objective as the winner's-curse tuner with constraint
// c >= 2 z_{1-alpha*nu/(2p)}/eta over nu in (0,1); adjusted level
// alpha(1-nu)e^{-eta}.
std::optional<IwTuning> iw_tuning_v2(double alpha, int p, double c);

Interval iw_interval_v2(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                        const SelectionOutcome& out, double alpha, double c,
                        double sigma);

// The 2p-1 row sign-pattern matrix of the selection polyhedron for the
// selected column j_star (zero-based).
Eigen::MatrixXd build_A(int p, int j_star);

// One-dimensional section of the polyhedron along the selected statistic:
// v_min = max of v_j over rows with delta*(A X'X_j*)_j < 0, v_max = min over
// positive rows; rows with |denominator| < 1e-12 constrain nothing.
TruncationLimits truncation_limits(const PolyhedralEvent& ev,
                                   const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& Y);

// Conditional interval for X_j*'mu from the Gaussian law of X_j*'Y truncated
// to [v_min, v_max].
Interval rcsi_interval_v2(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                          const SelectionOutcome& out, double alpha, double sigma);

}  // namespace selectica
