#include "selectica/lasso_dt.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "selectica/errors.hpp"
#include "selectica/stat_core.hpp"

namespace selectica {

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

struct CdResult {
    int sweeps;
    bool converged;
};

// Cyclic coordinate descent on the Gram form of ||Y - X b||^2 + lambda|b|_1:
// b_j <- S(g_j - (Gb)_j + G_jj b_j, lambda/2) / G_jj.  `q` caches G*beta.
CdResult coordinate_descent(const Eigen::MatrixXd& G, const Eigen::VectorXd& g,
                            double lambda, Eigen::VectorXd& beta,
                            double tol = 1e-8, int max_sweeps = 10000) {
    const int p = static_cast<int>(g.size());
    Eigen::VectorXd q = (beta.isZero(0.0)) ? Eigen::VectorXd::Zero(p)
                                           : Eigen::VectorXd(G * beta);
    int sweep = 0;
    bool converged = false;
    for (; sweep < max_sweeps && !converged; ++sweep) {
        double max_change = 0.0;
        for (int j = 0; j < p; ++j) {
            const double gjj = G(j, j);
            if (gjj <= 0.0) continue;  // empty column in a CV fold
            const double rho = g[j] - q[j] + gjj * beta[j];
            const double next = soft_threshold(rho, 0.5 * lambda) / gjj;
            const double d = next - beta[j];
            if (d != 0.0) {
                q += d * G.col(j);
                beta[j] = next;
                max_change = std::max(max_change, std::abs(d));
            }
        }
        converged = max_change < tol;
    }
    return {sweep, converged};
}

std::vector<int> seeded_permutation(int n, RngStream& stream) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = std::min(i, static_cast<int>(stream.uniform01() * (i + 1)));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

}  // namespace

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, double lambda) {
    if (lambda < 0.0) throw std::domain_error("lasso_fit: lambda must be nonnegative");
    const Eigen::MatrixXd G = X.transpose() * X;
    const Eigen::VectorXd g = X.transpose() * Y;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
    const CdResult r = coordinate_descent(G, g, lambda, beta);
    return {std::move(beta), lambda, r.sweeps, r.converged};
}

double cv_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, int folds,
                 int grid_size, RngStream& stream) {
    if (folds < 2) throw std::domain_error("cv_lambda: folds must be >= 2");
    if (grid_size < 2) throw std::domain_error("cv_lambda: grid_size must be >= 2");
    const int n = static_cast<int>(X.rows());
    const int p = static_cast<int>(X.cols());
    const double lambda_max = 2.0 * (X.transpose() * Y).cwiseAbs().maxCoeff();
    if (!(lambda_max > 0.0)) return 0.0;  // Y orthogonal to every column

    std::vector<double> grid(grid_size);
    const double log_lo = std::log(lambda_max * 1e-3);
    const double log_hi = std::log(lambda_max);
    for (int k = 0; k < grid_size; ++k)
        grid[k] = std::exp(log_lo + (log_hi - log_lo) * k / (grid_size - 1.0));
    grid.back() = lambda_max;

    const std::vector<int> perm = seeded_permutation(n, stream);
    std::vector<double> sse(grid_size, 0.0);
    for (int f = 0; f < folds; ++f) {
        const int lo = static_cast<int>(static_cast<long long>(f) * n / folds);
        const int hi = static_cast<int>(static_cast<long long>(f + 1) * n / folds);
        const int n_val = hi - lo;
        const int n_tr = n - n_val;
        if (n_val == 0 || n_tr == 0) continue;
        Eigen::MatrixXd Xtr(n_tr, p), Xval(n_val, p);
        Eigen::VectorXd Ytr(n_tr), Yval(n_val);
        int it = 0, iv = 0;
        for (int k = 0; k < n; ++k) {
            const int row = perm[k];
            if (k >= lo && k < hi) {
                Xval.row(iv) = X.row(row);
                Yval[iv++] = Y[row];
            } else {
                Xtr.row(it) = X.row(row);
                Ytr[it++] = Y[row];
            }
        }
        const Eigen::MatrixXd G = Xtr.transpose() * Xtr;
        const Eigen::VectorXd g = Xtr.transpose() * Ytr;
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
        for (int k = grid_size - 1; k >= 0; --k) {  // warm start down the path
            // Held-out SSE comparisons are insensitive far below this scale,
            // so the path runs at a looser tolerance than a final fit.
            coordinate_descent(G, g, grid[k], beta, 1e-5, 1000);
            sse[k] += (Yval - Xval * beta).squaredNorm();
        }
    }
    int best = grid_size - 1;
    for (int k = grid_size - 2; k >= 0; --k)
        if (sse[k] < sse[best]) best = k;  // strict: ties keep the larger lambda
    return grid[best];
}

ThinnedPair thin(const Eigen::VectorXd& Y, double c, double sigma, RngStream& stream) {
    if (!(c > 0.0)) throw std::domain_error("thin: c must be positive");
    Eigen::VectorXd zeta = sample_normal(stream, static_cast<int>(Y.size()), sigma);
    return {Y + c * zeta, Y - zeta / c, std::move(zeta), c};
}

Interval dt_interval(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                     const SelectionOutcome& out, double c, double alpha,
                     double sigma) {
    if (out.selected.empty()) throw EmptySelection("dt_interval: no selected columns");
    const int s = static_cast<int>(out.selected.size());
    Eigen::MatrixXd Xs(X.rows(), s);
    for (int k = 0; k < s; ++k) Xs.col(k) = X.col(out.selected[k]);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    if (qr.rank() < s) throw SingularDesign("dt_interval: selected columns rank deficient");

    const Eigen::VectorXd y_test = Y - out.zeta / c;
    const Eigen::VectorXd beta = qr.solve(y_test);
    const Eigen::MatrixXd Ginv = (Xs.transpose() * Xs).inverse();
    const double var11 = sigma * sigma * (1.0 + 1.0 / (c * c)) * Ginv(0, 0);
    const double hw = std::sqrt(var11) * (-normal_quantile(0.5 * alpha));
    return {beta[0] - hw, beta[0] + hw, 1.0 - alpha, "dt", beta[0]};
}

}  // namespace selectica
