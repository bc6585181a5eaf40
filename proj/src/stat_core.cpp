#include "selectica/stat_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace selectica {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kLog2Pi = 1.8378770664093454836;
// log(1e-280): support mass below this fraction of the untruncated mass is
// numerically meaningless for a pivot.
constexpr double kLogMassFloor = -644.67765722221751;

// log(1 - e^d) for d <= 0.
double log1mexp(double d) {
    if (d == -std::numeric_limits<double>::infinity()) return 0.0;
    if (d > -0.6931471805599453)  // 1 - e^d loses digits; expm1 keeps them
        return std::log(-std::expm1(d));
    return std::log1p(-std::exp(d));
}

double std_normal_log_pdf(double z) { return -0.5 * z * z - 0.5 * kLog2Pi; }

// AS241 rational approximations (PPND16), |error| ~ 1e-16 before polishing.
double as241(double p) {
    const double q = p - 0.5;
    double r, x;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        x = q *
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return x;
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -x : x;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double normal_log_cdf(double x) {
    if (x >= -1.0) return std::log1p(-0.5 * std::erfc(x * kSqrt1_2));
    if (x >= -37.0) return std::log(0.5 * std::erfc(-x * kSqrt1_2));
    // erfc underflows around -37.7; switch to the Mills-ratio expansion.
    const double z2 = x * x;
    const double s =
        -1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) + 105.0 / (z2 * z2 * z2 * z2);
    return -0.5 * z2 - 0.5 * kLog2Pi - std::log(-x) + std::log1p(s);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0,1)");
    if (p < 1e-300)
        throw InfiniteQuantile("normal_quantile: p below representable range");
    if (p > 0.5) return -normal_quantile(1.0 - p);  // 1-p is exact for p >= 0.5
    double x = as241(p);
    // One Newton step on log Phi(x) = log p keeps the tail relative error tight.
    const double lp = normal_log_cdf(x);
    x -= (lp - std::log(p)) * std::exp(lp - std_normal_log_pdf(x));
    return x;
}

namespace detail {

namespace {

struct Standardized {
    double zlo, zhi, zx;
};

Standardized standardize(const TruncatedGaussian& d, double x) {
    const double zlo = std::isinf(d.support.lo) ? -std::numeric_limits<double>::infinity()
                                                : (d.support.lo - d.mean) / d.sd;
    const double zhi = std::isinf(d.support.hi) ? std::numeric_limits<double>::infinity()
                                                : (d.support.hi - d.mean) / d.sd;
    const double zx = std::clamp((x - d.mean) / d.sd, zlo, zhi);
    return {zlo, zhi, zx};
}

// log(Phi(b) - Phi(a)) for a <= b, stable in either deep tail.
double log_phi_diff(double a, double b) {
    if (a > 5.0) {
        // upper tail: Q(a) - Q(b) with Q the survival function
        const double lqa = normal_log_cdf(-a);
        const double lqb = std::isinf(b) ? -std::numeric_limits<double>::infinity()
                                         : normal_log_cdf(-b);
        return lqa + log1mexp(lqb - lqa);
    }
    if (b < -5.0) {
        const double lpb = normal_log_cdf(b);
        const double lpa = std::isinf(a) ? -std::numeric_limits<double>::infinity()
                                         : normal_log_cdf(a);
        return lpb + log1mexp(lpa - lpb);
    }
    double diff;
    if (a >= 0.0) {
        diff = 0.5 * std::erfc(a * kSqrt1_2) - 0.5 * std::erfc(b * kSqrt1_2);
    } else {
        diff = normal_cdf(b) - normal_cdf(a);
    }
    return std::log(std::max(diff, 0.0));
}

}  // namespace

double log_support_mass(const TruncatedGaussian& d) {
    const auto s = standardize(d, d.mean);
    if (std::isinf(s.zlo) && std::isinf(s.zhi)) return 0.0;
    return log_phi_diff(s.zlo, s.zhi);
}

double trunc_cdf_no_floor(const TruncatedGaussian& d, double x) {
    const auto s = standardize(d, x);
    if (std::isinf(s.zlo) && std::isinf(s.zhi)) return normal_cdf(s.zx);
    const double num = log_phi_diff(s.zlo, s.zx);
    const double den = log_phi_diff(s.zlo, s.zhi);
    if (num == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::min(1.0, std::exp(num - den));
}

}  // namespace detail

double trunc_cdf(const TruncatedGaussian& d, double x) {
    if (!(d.sd > 0.0)) throw std::invalid_argument("trunc_cdf: sd must be positive");
    if (!(d.support.lo <= d.support.hi))
        throw std::invalid_argument("trunc_cdf: support endpoints out of order");
    if (detail::log_support_mass(d) < kLogMassFloor)
        throw DegenerateTruncation("trunc_cdf: support mass below 1e-280 of untruncated");
    return detail::trunc_cdf_no_floor(d, x);
}

double solve_mean(double x, double sd, const RealInterval& support, double target) {
    if (!(sd > 0.0)) throw std::invalid_argument("solve_mean: sd must be positive");
    if (!(target > 0.0 && target < 1.0))
        throw std::domain_error("solve_mean: target must lie in (0,1)");
    const double clamp_tol = 1e-12 * std::max(1.0, sd);
    double xx = x;
    if (xx < support.lo) {
        if (support.lo - xx > clamp_tol)
            throw std::invalid_argument("solve_mean: x below support");
        xx = support.lo;
    } else if (xx > support.hi) {
        if (xx - support.hi > clamp_tol)
            throw std::invalid_argument("solve_mean: x above support");
        xx = support.hi;
    }
    // A support sliver is degenerate at every mean; check once at the anchor.
    if (detail::log_support_mass({xx, sd, support}) < kLogMassFloor)
        throw DegenerateTruncation("solve_mean: support mass below floor");

    const auto g = [&](double m) {
        return detail::trunc_cdf_no_floor({m, sd, support}, xx) - target;
    };
    // The CDF is strictly decreasing in the mean: expand each side until the
    // signs bracket the root.
    const double cap = 1e8 * sd;
    double w = sd;
    double m_lo = xx - w;
    while (g(m_lo) < 0.0) {
        w *= 2.0;
        if (w > cap) throw RootNotBracketed("solve_mean: target unattainable (low side)");
        m_lo = xx - w;
    }
    w = sd;
    double m_hi = xx + w;
    while (g(m_hi) > 0.0) {
        w *= 2.0;
        if (w > cap) throw RootNotBracketed("solve_mean: target unattainable (high side)");
        m_hi = xx + w;
    }
    double mid = 0.5 * (m_lo + m_hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (m_lo + m_hi);
        const double gm = g(mid);
        if (std::abs(gm) <= 1e-9) return mid;
        if (gm > 0.0)
            m_lo = mid;
        else
            m_hi = mid;
    }
    return mid;
}

double draw_normal(RngStream& stream, double sd) {
    if (!(sd > 0.0)) throw std::domain_error("draw_normal: sd must be positive");
    return sd * normal_quantile(stream.uniform01());
}

double draw_laplace(RngStream& stream, double scale) {
    if (!(scale > 0.0)) throw std::domain_error("draw_laplace: scale must be positive");
    const double u = stream.uniform01();
    return (u < 0.5) ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

Eigen::VectorXd sample_normal(RngStream& stream, int n, double sd) {
    if (n < 1) throw std::domain_error("sample_normal: n must be >= 1");
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = draw_normal(stream, sd);
    return out;
}

Eigen::VectorXd sample_laplace(RngStream& stream, int n, double scale) {
    if (n < 1) throw std::domain_error("sample_laplace: n must be >= 1");
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = draw_laplace(stream, scale);
    return out;
}

}  // namespace selectica
