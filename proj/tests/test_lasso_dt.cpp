#include <Eigen/Core>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "selectica/errors.hpp"
#include "selectica/lasso_dt.hpp"
#include "selectica/selection.hpp"
#include "selectica/simlab.hpp"
#include "selectica/stat_core.hpp"

using namespace selectica;

namespace {

double soft(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

Eigen::MatrixXd orthonormal_design(int n, int p, RngStream& stream) {
    Eigen::MatrixXd raw(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) raw(i, j) = draw_normal(stream, 1.0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    return Q;
}

}  // namespace

TEST_SUITE("lasso_dt") {

TEST_CASE("lasso_fit at lambda zero is least squares") {
    RngStream design = RngStream::derive(101, 0, "ols/design");
    RngStream noise = RngStream::derive(101, 0, "ols/noise");
    const Eigen::MatrixXd X = gen_design(20, 4, 0.3, design);
    const Eigen::VectorXd Y = sample_normal(noise, 20, 1.0);
    const LassoFit fit = lasso_fit(X, Y, 0.0);
    const Eigen::VectorXd ols = X.colPivHouseholderQr().solve(Y);
    CHECK((fit.beta - ols).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(fit.converged);
    CHECK_THROWS_AS(lasso_fit(X, Y, -1.0), std::domain_error);
}

TEST_CASE("lasso_fit matches the orthogonal closed form") {
    RngStream s = RngStream::derive(103, 0, "orth");
    const Eigen::MatrixXd Q = orthonormal_design(15, 5, s);
    RngStream noise = RngStream::derive(103, 0, "orth/noise");
    const Eigen::VectorXd Y = sample_normal(noise, 15, 1.5);
    for (double lambda : {0.1, 0.7, 2.0}) {
        const LassoFit fit = lasso_fit(Q, Y, lambda);
        for (int j = 0; j < 5; ++j)
            CHECK(fit.beta[j] ==
                  doctest::Approx(soft(Q.col(j).dot(Y), 0.5 * lambda)).epsilon(1e-8));
    }
}

TEST_CASE("lasso_fit satisfies the stationarity certificate") {
    for (int rep = 0; rep < 50; ++rep) {
        RngStream design = RngStream::derive(107, rep, "kkt/design");
        RngStream noise = RngStream::derive(107, rep, "kkt/noise");
        RngStream pick = RngStream::derive(107, rep, "kkt/lambda");
        const int n = 12 + (rep % 3) * 6, p = 3 + (rep % 4);
        const Eigen::MatrixXd X = gen_design(n, p, 0.5, design);
        const Eigen::VectorXd Y = sample_normal(noise, n, 1.0);
        const double lmax = 2.0 * (X.transpose() * Y).cwiseAbs().maxCoeff();
        const double lambda = lmax * (0.05 + 0.9 * pick.uniform01());
        const LassoFit fit = lasso_fit(X, Y, lambda);
        CHECK(fit.converged);
        const Eigen::VectorXd r = Y - X * fit.beta;
        for (int j = 0; j < p; ++j) {
            const double grad = 2.0 * X.col(j).dot(r);
            CHECK(std::abs(grad) <= lambda + 1e-6);
            if (fit.beta[j] != 0.0)
                CHECK(grad ==
                      doctest::Approx(lambda * (fit.beta[j] > 0 ? 1.0 : -1.0)).epsilon(1e-6));
        }
    }
}

TEST_CASE("lasso_fit is identically zero above the critical penalty") {
    RngStream design = RngStream::derive(109, 0, "zero/design");
    RngStream noise = RngStream::derive(109, 0, "zero/noise");
    const Eigen::MatrixXd X = gen_design(25, 6, 0.5, design);
    const Eigen::VectorXd Y = sample_normal(noise, 25, 1.0);
    const double lmax = 2.0 * (X.transpose() * Y).cwiseAbs().maxCoeff();
    CHECK(lasso_fit(X, Y, lmax).beta.isZero(0.0));
    CHECK(lasso_fit(X, Y, 1.5 * lmax).beta.isZero(0.0));
    CHECK(!lasso_fit(X, Y, 0.5 * lmax).beta.isZero(0.0));
}

TEST_CASE("cv_lambda is deterministic, bounded, and conservative on pure noise") {
    for (int seed = 0; seed < 3; ++seed) {
        RngStream design = RngStream::derive(113, seed, "cv/design");
        RngStream noise = RngStream::derive(113, seed, "cv/noise");
        const Eigen::MatrixXd X = gen_design(40, 6, 0.5, design);
        const Eigen::VectorXd Y = sample_normal(noise, 40, 1.0);
        const double lmax = 2.0 * (X.transpose() * Y).cwiseAbs().maxCoeff();

        RngStream s1 = RngStream::derive(113, seed, "cv/perm");
        RngStream s2 = RngStream::derive(113, seed, "cv/perm");
        const double l1 = cv_lambda(X, Y, 3, 50, s1);
        const double l2 = cv_lambda(X, Y, 3, 50, s2);
        CHECK(l1 == l2);
        CHECK(l1 >= lmax * 1e-3 * (1.0 - 1e-12));
        CHECK(l1 <= lmax * (1.0 + 1e-12));
        // pure noise: cross-validation should land in the top third of the log grid
        CHECK(l1 >= lmax * 1e-1);
    }
    RngStream bad = RngStream::derive(113, 9, "cv/bad");
    const Eigen::MatrixXd X = Eigen::MatrixXd::Identity(4, 2);
    const Eigen::VectorXd Y = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(cv_lambda(X, Y, 1, 50, bad), std::domain_error);
    CHECK_THROWS_AS(cv_lambda(X, Y, 3, 1, bad), std::domain_error);
}

TEST_CASE("thin reconstructs the data and splits it independently") {
    RngStream noise = RngStream::derive(127, 0, "thin/data");
    const Eigen::VectorXd Y = sample_normal(noise, 30, 1.0);
    const double c = 0.8;
    RngStream ts = RngStream::derive(127, 0, "thin/zeta");
    const ThinnedPair pair = thin(Y, c, 1.0, ts);
    CHECK(pair.c == c);
    const Eigen::VectorXd recon = (pair.y_train + c * c * pair.y_test) / (1.0 + c * c);
    CHECK((recon - Y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pair.y_train - (Y + c * pair.zeta)).cwiseAbs().maxCoeff() < 1e-12);

    // moments over replicates at a fixed coordinate
    const int reps = 6000;
    double st = 0.0, st2 = 0.0, sv = 0.0, sv2 = 0.0, cross = 0.0;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    for (int rep = 0; rep < reps; ++rep) {
        RngStream r = RngStream::derive(127, rep, "thin/moments");
        RngStream d = RngStream::derive(128, rep, "thin/data2");
        const Eigen::VectorXd y = sample_normal(d, 1, 1.0);
        const ThinnedPair p = thin(y, c, 1.0, r);
        st += p.y_train[0];
        st2 += p.y_train[0] * p.y_train[0];
        sv += p.y_test[0];
        sv2 += p.y_test[0] * p.y_test[0];
        cross += p.y_train[0] * p.y_test[0];
    }
    const double var_train = st2 / reps - (st / reps) * (st / reps);
    const double var_test = sv2 / reps - (sv / reps) * (sv / reps);
    const double cov = cross / reps - (st / reps) * (sv / reps);
    CHECK(var_train == doctest::Approx(1.0 + c * c).epsilon(0.06));
    CHECK(var_test == doctest::Approx(1.0 + 1.0 / (c * c)).epsilon(0.06));
    CHECK(std::abs(cov / std::sqrt(var_train * var_test)) < 0.05);

    RngStream bad = RngStream::derive(127, 0, "thin/bad");
    CHECK_THROWS_AS(thin(Y, 0.0, 1.0, bad), std::domain_error);
}

TEST_CASE("dt interval has the closed-form width on a single unit column") {
    RngStream noise = RngStream::derive(131, 0, "dt/noise");
    const int n = 10;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, 2);
    X(0, 0) = 1.0;
    X(1, 1) = 1.0;
    const Eigen::VectorXd Y = sample_normal(noise, n, 1.0);
    SelectionOutcome out;
    out.selected = {0};
    out.zeta = Eigen::VectorXd::Zero(n);
    const Interval iv = dt_interval(Y, X, out, 1.0, 0.05, 1.0);
    CHECK(iv.method == "dt");
    CHECK(iv.width() == doctest::Approx(5.5436152973987125).epsilon(1e-12));
    CHECK((iv.lo + iv.hi) / 2.0 == doctest::Approx(Y[0]).epsilon(1e-12));

    SelectionOutcome dup;
    dup.selected = {0, 0};
    dup.zeta = Eigen::VectorXd::Zero(n);
    CHECK_THROWS_AS(dt_interval(Y, X, dup, 1.0, 0.05, 1.0), SingularDesign);
    SelectionOutcome none;
    none.zeta = Eigen::VectorXd::Zero(n);
    CHECK_THROWS_AS(dt_interval(Y, X, none, 1.0, 0.05, 1.0), EmptySelection);
}

TEST_CASE("dt covers the projected target at the nominal rate") {
    int covered = 0, kept = 0;
    for (int rep = 0; rep < 450; ++rep) {
        RngStream design = RngStream::derive(137, rep, "dt/cov/design");
        RngStream signal = RngStream::derive(137, rep, "dt/cov/signal");
        RngStream noise = RngStream::derive(137, rep, "dt/cov/noise");
        RngStream sel = RngStream::derive(137, rep, "dt/cov/select");
        const Eigen::MatrixXd X = gen_design(25, 6, 0.5, design);
        const Eigen::VectorXd phi = gen_signal(6, 0.5, 2.0, signal);
        const Eigen::VectorXd mu = X * phi;
        const Eigen::VectorXd Y = mu + sample_normal(noise, 25, 1.0);
        SelectionOutcome out;
        try {
            out = select_v3(Y, X, 1.0, 1.0, sel);
        } catch (const EmptySelection&) {
            continue;
        }
        const int s = static_cast<int>(out.selected.size());
        Eigen::MatrixXd Xs(25, s);
        for (int k = 0; k < s; ++k) Xs.col(k) = X.col(out.selected[k]);
        const double target = Xs.colPivHouseholderQr().solve(mu)[0];
        const Interval iv = dt_interval(Y, X, out, 1.0, 0.05, 1.0);
        ++kept;
        if (iv.contains(target)) ++covered;
    }
    REQUIRE(kept > 300);
    const double cov = static_cast<double>(covered) / kept;
    CHECK(cov >= 0.915);
    CHECK(cov <= 0.985);
}

}  // TEST_SUITE
