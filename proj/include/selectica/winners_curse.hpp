#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>

#include "selectica/interval.hpp"
#include "selectica/rng.hpp"
#include "selectica/selection.hpp"

namespace selectica {

// Minimizes the widened half-width sigma*z_{1-l/2} over the tuning pair
// (eta, nu) subject to eta*c >= 2 z_{1-alpha(alpha-nu)/(2n)}, nu in (0,alpha);
// the constraint binds, leaving a 1-D search (512-point grid + golden-section
// refinement).  Adjusted level l = alpha(1-alpha+nu)e^{-eta}.  Returns nullopt
// when l/2 is too small for the upper-tail quantile to be representable: the
// interval is infinitely wide.
std::optional<IwTuning> iw_tuning_v1(double alpha, int n, double c);

// [Y_sel +- sigma*z_{1-l/2}] around the selected observation; infinite
// endpoints when the tuner reports an unrepresentable level.
Interval iw_interval_v1(const Eigen::VectorXd& Y, const SelectionOutcome& out,
                        double alpha, double c, double sigma);

// Interval from the conditional law of Y_i given (Y_i + zeta_i, sign zeta_i):
// a Gaussian with mean shifted by delta*sigma^2/c truncated to the halfline
// at Y_i + zeta_i.  Both endpoints solve the truncated-CDF equation in the
// shifted-mean parametrization.
Interval fission_interval_v1(const Eigen::VectorXd& Y, const SelectionOutcome& out,
                             double alpha, double c, double sigma);

// Gaussian-thinning interval: select on Y + c*zeta, infer with Y - zeta/c
// (independent of the selection); unbiased midpoint, fixed half-width
// sigma*sqrt(1 + 1/c^2)*z_{1-alpha/2}.
std::pair<SelectionOutcome, Interval> gauss_thin_interval_v1(
    const Eigen::VectorXd& Y, double c, double sigma, double alpha,
    RngStream& stream);

// Closed-form lower bound on the selection bias of the thinned maximum:
// (sigma/2)(sqrt(1+c^2) - c)sqrt(log n).
double bias_lower_bound(int n, double c, double sigma);

}  // namespace selectica
