#include "selectica/max_contrast.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "iw_tune.hpp"

namespace selectica {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<IwTuning> iw_tuning_v2(double alpha, int p, double c) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("iw_tuning_v2: alpha must lie in (0,1)");
    if (p < 1) throw std::domain_error("iw_tuning_v2: p must be >= 1");
    if (!(c > 0.0)) throw std::domain_error("iw_tuning_v2: c must be positive");

    const auto eta_of_nu = [&](double nu) {
        const double q = alpha * nu / (2.0 * p);
        return 2.0 * (-normal_quantile(q)) / c;
    };
    const auto log_level = [&](double nu) {
        return std::log(alpha) + std::log1p(-nu) - eta_of_nu(nu);
    };
    IwTuning t = detail::tune_nu(0.0, 1.0, log_level, eta_of_nu);
    if (detail::level_unrepresentable(t.adjusted_level)) return std::nullopt;
    return t;
}

Interval iw_interval_v2(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                        const SelectionOutcome& out, double alpha, double c,
                        double sigma) {
    const double mid = X.col(out.index()).dot(Y);
    const auto tuning = iw_tuning_v2(alpha, static_cast<int>(X.cols()), c);
    if (!tuning) return {-kInf, kInf, 1.0 - alpha, "iw", mid};
    const double hw = sigma * (-normal_quantile(0.5 * tuning->adjusted_level));
    return {mid - hw, mid + hw, 1.0 - alpha, "iw", mid};
}

Eigen::MatrixXd build_A(int p, int j_star) {
    if (j_star < 0 || j_star >= p) throw std::out_of_range("build_A: j_star out of range");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * p - 1, p);
    int r = 0;
    A(r++, j_star) = -1.0;
    for (int k = 0; k < j_star; ++k) {  // e_k - e_j* for k < j*
        A(r, k) = 1.0;
        A(r++, j_star) = -1.0;
    }
    for (int k = j_star + 1; k < p; ++k) {  // e_k - e_j* for k > j*
        A(r, k) = 1.0;
        A(r++, j_star) = -1.0;
    }
    for (int k = 0; k < j_star; ++k) {  // -e_k - e_j*
        A(r, k) = -1.0;
        A(r++, j_star) = -1.0;
    }
    for (int k = j_star + 1; k < p; ++k) {
        A(r, k) = -1.0;
        A(r++, j_star) = -1.0;
    }
    return A;
}

TruncationLimits truncation_limits(const PolyhedralEvent& ev,
                                   const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& Y) {
    const Eigen::VectorXd u = X.transpose() * X.col(ev.j_star);
    const Eigen::VectorXd denom = ev.A * u;
    const Eigen::VectorXd offs = ev.A * (ev.zeta + X.transpose() * ev.W);

    double v_min = -kInf;
    double v_max = kInf;
    for (int j = 0; j < denom.size(); ++j) {
        if (std::abs(denom[j]) < 1e-12) continue;  // row does not bind the 1-D section
        const double v = -offs[j] / denom[j];
        if (ev.delta * denom[j] < 0.0) {
            v_min = std::max(v_min, v);
        } else {
            v_max = std::min(v_max, v);
        }
    }
    if (v_min > v_max + 1e-8)
        throw std::logic_error("truncation_limits: selection event violated");
    return {v_min, v_max};
}

Interval rcsi_interval_v2(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                          const SelectionOutcome& out, double alpha, double sigma) {
    const int j = out.index();
    const Eigen::VectorXd Xj = X.col(j);
    const double stat = Xj.dot(Y);
    const Eigen::VectorXd W = Y - Xj * stat;  // (I - X_j X_j')Y for unit X_j
    PolyhedralEvent ev{build_A(static_cast<int>(X.cols()), j), out.delta[0], out.zeta,
                       W, j};
    const TruncationLimits lims = truncation_limits(ev, X, Y);
    const RealInterval support{lims.v_min, lims.v_max};
    const double a = solve_mean(stat, sigma, support, 1.0 - 0.5 * alpha);
    const double b = solve_mean(stat, sigma, support, 0.5 * alpha);
    return {a, b, 1.0 - alpha, "rcsi", stat};
}

}  // namespace selectica
