#pragma once

#include <Eigen/Core>
#include <limits>

#include "selectica/errors.hpp"
#include "selectica/rng.hpp"

namespace selectica {

// Interval of the real line; either endpoint may be infinite.
struct RealInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    static RealInterval whole_line() { return {}; }
    static RealInterval at_most(double t) { return {-std::numeric_limits<double>::infinity(), t}; }
    static RealInterval at_least(double t) { return {t, std::numeric_limits<double>::infinity()}; }
};

// N(mean, sd^2) restricted to `support`.
struct TruncatedGaussian {
    double mean;
    double sd;
    RealInterval support;
};

double normal_cdf(double x);

// log Phi(x), finite far into the lower tail (asymptotic expansion below -37).
double normal_log_cdf(double x);

// Inverse standard normal CDF (AS241 with one Newton polish).
// Throws std::domain_error outside (0,1) and InfiniteQuantile for p < 1e-300.
double normal_quantile(double p);

// CDF of a truncated Gaussian at x (clamped into the support).  Computed via
// complementary tails when both standardized endpoints sit in the same deep
// tail.  Throws DegenerateTruncation when the support holds < 1e-280 of the
// untruncated mass.
double trunc_cdf(const TruncatedGaussian& d, double x);

// Solves trunc_cdf((m, sd, support), x) = target for the mean m.  The CDF is
// strictly decreasing in m; the root is bracketed by doubling around x (cap
// 1e8*sd, else RootNotBracketed) and then bisected to |cdf - target| <= 1e-9.
double solve_mean(double x, double sd, const RealInterval& support, double target);

double draw_normal(RngStream& stream, double sd);
double draw_laplace(RngStream& stream, double scale);

Eigen::VectorXd sample_normal(RngStream& stream, int n, double sd);
Eigen::VectorXd sample_laplace(RngStream& stream, int n, double scale);

namespace detail {
// trunc_cdf without the support-mass floor; used by the root solver, whose
// bracket probes visit means where the absolute support mass underflows even
// though the conditional CDF is well defined.
double trunc_cdf_no_floor(const TruncatedGaussian& d, double x);
// log of the support's Gaussian mass.
double log_support_mass(const TruncatedGaussian& d);
}  // namespace detail

}  // namespace selectica
