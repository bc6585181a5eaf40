#include "selectica/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "selectica/errors.hpp"
#include "selectica/lasso_dt.hpp"
#include "selectica/stat_core.hpp"

namespace selectica {

int argmax_select(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw std::domain_error("argmax_select: empty input");
    int best = 0;
    for (int i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;  // strict: ties keep the smallest index
    return best;
}

SelectionOutcome select_v1(const Eigen::VectorXd& Y, double c, RngStream& stream) {
    if (!(c > 0.0)) throw std::domain_error("select_v1: c must be positive");
    const int n = static_cast<int>(Y.size());
    Eigen::VectorXd zeta(n);
    std::vector<int> delta(n);
    for (int i = 0; i < n; ++i) {
        double z = 0.0;
        do {
            z = draw_laplace(stream, c);
        } while (z == 0.0);  // sign datum undefined at zero
        zeta[i] = z;
        delta[i] = (z > 0.0) ? 1 : -1;
    }
    const int idx = argmax_select(Y + zeta);
    return {{idx}, std::move(zeta), std::move(delta)};
}

SelectionOutcome select_v2(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                           double c, RngStream& stream) {
    if (!(c > 0.0)) throw std::domain_error("select_v2: c must be positive");
    const int p = static_cast<int>(X.cols());
    for (int j = 0; j < p; ++j)
        if (std::abs(X.col(j).norm() - 1.0) > 1e-8)
            throw std::invalid_argument("select_v2: columns must be unit norm");
    Eigen::VectorXd zeta(p);
    for (int j = 0; j < p; ++j) {
        double z = 0.0;
        do {
            z = draw_laplace(stream, c);
        } while (z == 0.0);
        zeta[j] = z;
    }
    const Eigen::VectorXd stat = X.transpose() * Y + zeta;
    const int idx = argmax_select(stat.cwiseAbs());
    const int delta = (stat[idx] >= 0.0) ? 1 : -1;
    return {{idx}, std::move(zeta), {delta}};
}

SelectionOutcome select_v3(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                           double c, double sigma, RngStream& stream, int cv_folds,
                           std::optional<double> forced_lambda) {
    if (!(c > 0.0)) throw std::domain_error("select_v3: c must be positive");
    const ThinnedPair pair = thin(Y, c, sigma, stream);
    const double lambda = forced_lambda
                              ? *forced_lambda
                              : cv_lambda(X, pair.y_train, cv_folds, 50, stream);
    const LassoFit fit = lasso_fit(X, pair.y_train, lambda);

    std::vector<int> selected;
    for (int j = 0; j < fit.beta.size(); ++j)
        if (fit.beta[j] != 0.0) selected.push_back(j);
    if (selected.empty()) throw EmptySelection("select_v3: lasso fit is identically zero");
    std::sort(selected.begin(), selected.end(), [&](int a, int b) {
        const double ma = std::abs(fit.beta[a]);
        const double mb = std::abs(fit.beta[b]);
        return (ma != mb) ? (ma > mb) : (a < b);
    });
    return {std::move(selected), pair.zeta, {}};
}

}  // namespace selectica
