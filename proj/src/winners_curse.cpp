#include "selectica/winners_curse.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "iw_tune.hpp"
#include "selectica/stat_core.hpp"

namespace selectica {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<IwTuning> iw_tuning_v1(double alpha, int n, double c) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("iw_tuning_v1: alpha must lie in (0,1)");
    if (n < 1) throw std::domain_error("iw_tuning_v1: n must be >= 1");
    if (!(c > 0.0)) throw std::domain_error("iw_tuning_v1: c must be positive");

    const auto eta_of_nu = [&](double nu) {
        const double q = alpha * (alpha - nu) / (2.0 * n);
        return 2.0 * (-normal_quantile(q)) / c;
    };
    const auto log_level = [&](double nu) {
        return std::log(alpha) + std::log1p(nu - alpha) - eta_of_nu(nu);
    };
    IwTuning t = detail::tune_nu(0.0, alpha, log_level, eta_of_nu);
    if (detail::level_unrepresentable(t.adjusted_level)) return std::nullopt;
    return t;
}

Interval iw_interval_v1(const Eigen::VectorXd& Y, const SelectionOutcome& out,
                        double alpha, double c, double sigma) {
    const double mid = Y[out.index()];
    const auto tuning = iw_tuning_v1(alpha, static_cast<int>(Y.size()), c);
    if (!tuning) return {-kInf, kInf, 1.0 - alpha, "iw", mid};
    const double hw = sigma * (-normal_quantile(0.5 * tuning->adjusted_level));
    return {mid - hw, mid + hw, 1.0 - alpha, "iw", mid};
}

Interval fission_interval_v1(const Eigen::VectorXd& Y, const SelectionOutcome& out,
                             double alpha, double c, double sigma) {
    const int i = out.index();
    const int delta = out.delta[i];
    const double t = Y[i] + out.zeta[i];
    const RealInterval support =
        (delta > 0) ? RealInterval::at_most(t) : RealInterval::at_least(t);
    const double shift = delta * sigma * sigma / c;
    const double m_a = solve_mean(Y[i], sigma, support, 1.0 - 0.5 * alpha);
    const double m_b = solve_mean(Y[i], sigma, support, 0.5 * alpha);
    return {m_a - shift, m_b - shift, 1.0 - alpha, "fission", Y[i]};
}

std::pair<SelectionOutcome, Interval> gauss_thin_interval_v1(
    const Eigen::VectorXd& Y, double c, double sigma, double alpha,
    RngStream& stream) {
    if (!(c > 0.0)) throw std::domain_error("gauss_thin_interval_v1: c must be positive");
    const int n = static_cast<int>(Y.size());
    Eigen::VectorXd zeta = sample_normal(stream, n, sigma);
    const int idx = argmax_select(Y + c * zeta);
    const double mid = Y[idx] - zeta[idx] / c;
    const double hw =
        sigma * std::sqrt(1.0 + 1.0 / (c * c)) * (-normal_quantile(0.5 * alpha));
    SelectionOutcome out{{idx}, std::move(zeta), {}};
    Interval iv{mid - hw, mid + hw, 1.0 - alpha, "gauss_thin", mid};
    return {std::move(out), std::move(iv)};
}

double bias_lower_bound(int n, double c, double sigma) {
    if (n < 1) throw std::domain_error("bias_lower_bound: n must be >= 1");
    if (c < 0.0) throw std::domain_error("bias_lower_bound: c must be nonnegative");
    return 0.5 * sigma * (std::sqrt(1.0 + c * c) - c) *
           std::sqrt(std::log(static_cast<double>(n)));
}

}  // namespace selectica
