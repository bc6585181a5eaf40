#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "selectica/stat_core.hpp"
#include "selectica/winners_curse.hpp"

using namespace selectica;

TEST_SUITE("winners_curse") {

TEST_CASE("iw tuner reference point at large c") {
    const auto t = iw_tuning_v1(0.05, 100, 10.0);
    REQUIRE(t.has_value());
    CHECK(t->adjusted_level == doctest::Approx(2.045706e-2).epsilon(1e-5));
    CHECK(t->nu == doctest::Approx(0.00711668).epsilon(1e-3));
    const double hw = -normal_quantile(0.5 * t->adjusted_level);
    CHECK(hw == doctest::Approx(2.317858).epsilon(1e-5));
}

TEST_CASE("iw tuner reference points at the figure scales") {
    struct Case {
        int n;
        double c, hw, level;
    };
    const std::vector<Case> cases = {
        {10, std::sqrt(0.165), 6.165900, 7.008319e-10},
        {100, std::sqrt(0.165), 6.582876, 4.614328e-11},
        {10, std::sqrt(1.5), 3.845992, 1.200655e-4},
        {100, std::sqrt(1.5), 4.061765, 4.870318e-5},
    };
    for (const Case& k : cases) {
        const auto t = iw_tuning_v1(0.05, k.n, k.c);
        REQUIRE(t.has_value());
        CHECK(t->adjusted_level == doctest::Approx(k.level).epsilon(1e-4));
        CHECK(-normal_quantile(0.5 * t->adjusted_level) ==
              doctest::Approx(k.hw).epsilon(1e-4));
    }
}

TEST_CASE("iw tuner satisfies its defining identities") {
    const double alpha = 0.05;
    for (int n : {10, 100, 1000}) {
        for (double c : {0.5, 1.2247, 5.0}) {
            const auto t = iw_tuning_v1(alpha, n, c);
            REQUIRE(t.has_value());
            CHECK(t->nu > 0.0);
            CHECK(t->nu < alpha);
            // the stability constraint binds at the optimum
            const double q = alpha * (alpha - t->nu) / (2.0 * n);
            CHECK(t->eta * c == doctest::Approx(2.0 * (-normal_quantile(q))).epsilon(1e-8));
            // the adjusted level is exactly the stability bound
            CHECK(t->adjusted_level ==
                  doctest::Approx(alpha * (1.0 - alpha + t->nu) * std::exp(-t->eta))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("iw tuner reports an unrepresentable level at tiny c") {
    CHECK(!iw_tuning_v1(0.05, 100, 0.05).has_value());
    CHECK_THROWS_AS(iw_tuning_v1(0.0, 100, 1.0), std::domain_error);
    CHECK_THROWS_AS(iw_tuning_v1(0.05, 0, 1.0), std::domain_error);
    CHECK_THROWS_AS(iw_tuning_v1(0.05, 100, 0.0), std::domain_error);
}

TEST_CASE("iw interval is centered at the winner with the widened half-width") {
    RngStream noise = RngStream::derive(7, 0, "iw/noise");
    RngStream sel = RngStream::derive(7, 0, "iw/select");
    const Eigen::VectorXd Y = sample_normal(noise, 100, 1.0);
    const SelectionOutcome out = select_v1(Y, 1.2247, sel);
    const Interval iv = iw_interval_v1(Y, out, 0.05, 1.2247, 1.0);
    CHECK(iv.method == "iw");
    CHECK((iv.lo + iv.hi) / 2.0 == doctest::Approx(Y[out.index()]).epsilon(1e-12));
    const auto t = iw_tuning_v1(0.05, 100, 1.2247);
    CHECK(iv.width() ==
          doctest::Approx(2.0 * (-normal_quantile(0.5 * t->adjusted_level))).epsilon(1e-12));

    const Interval wide = iw_interval_v1(Y, out, 0.05, 0.05, 1.0);
    CHECK(wide.infinite());
    CHECK(wide.lo == -std::numeric_limits<double>::infinity());
    CHECK(wide.hi == std::numeric_limits<double>::infinity());
}

TEST_CASE("fission endpoints solve the truncated-mean equations") {
    const double alpha = 0.05, sigma = 1.0, c = 1.2247;
    for (int rep = 0; rep < 25; ++rep) {
        RngStream noise = RngStream::derive(13, rep, "fission/noise");
        RngStream sel = RngStream::derive(13, rep, "fission/select");
        const Eigen::VectorXd Y = sample_normal(noise, 10, sigma);
        const SelectionOutcome out = select_v1(Y, c, sel);
        const Interval iv = fission_interval_v1(Y, out, alpha, c, sigma);
        CHECK(iv.lo < iv.hi);

        const int i = out.index();
        const double t = Y[i] + out.zeta[i];
        const int delta = out.delta[i];
        const RealInterval support =
            (delta > 0) ? RealInterval::at_most(t) : RealInterval::at_least(t);
        const double shift = delta * sigma * sigma / c;
        // The solver probes means whose absolute support mass can underflow the
        // public floor even though the conditional CDF stays well defined.
        CHECK(detail::trunc_cdf_no_floor({iv.lo + shift, sigma, support}, Y[i]) ==
              doctest::Approx(1.0 - 0.5 * alpha).epsilon(1e-7));
        CHECK(detail::trunc_cdf_no_floor({iv.hi + shift, sigma, support}, Y[i]) ==
              doctest::Approx(0.5 * alpha).epsilon(2e-7));
    }
}

TEST_CASE("fission covers the selected null mean at the conditional rate") {
    const double alpha = 0.05, c = 1.2247;
    int covered = 0;
    const int reps = 800;
    for (int rep = 0; rep < reps; ++rep) {
        RngStream noise = RngStream::derive(19, rep, "fission/cov/noise");
        RngStream sel = RngStream::derive(19, rep, "fission/cov/select");
        const Eigen::VectorXd Y = sample_normal(noise, 10, 1.0);
        const SelectionOutcome out = select_v1(Y, c, sel);
        const Interval iv = fission_interval_v1(Y, out, alpha, c, 1.0);
        if (iv.contains(0.0)) ++covered;
    }
    const double cov = static_cast<double>(covered) / reps;
    CHECK(cov >= 0.925);
    CHECK(cov <= 0.975);
}

TEST_CASE("fission approaches the classical interval as c grows") {
    const double classical = 2.0 * (-normal_quantile(0.025));
    std::vector<double> widths;
    for (int rep = 0; rep < 31; ++rep) {
        RngStream noise = RngStream::derive(29, rep, "fission/limit/noise");
        RngStream sel = RngStream::derive(29, rep, "fission/limit/select");
        const Eigen::VectorXd Y = sample_normal(noise, 10, 1.0);
        const SelectionOutcome out = select_v1(Y, 100.0, sel);
        widths.push_back(fission_interval_v1(Y, out, 0.05, 100.0, 1.0).width());
    }
    std::sort(widths.begin(), widths.end());
    CHECK(widths[15] == doctest::Approx(classical).epsilon(0.05));
}

TEST_CASE("gauss thinning has the closed-form width and unbiased midpoint") {
    RngStream noise = RngStream::derive(43, 0, "thin/noise");
    const Eigen::VectorXd Y = sample_normal(noise, 50, 1.0);
    RngStream ts = RngStream::derive(43, 0, "thin/zeta");
    const auto [out, iv] = gauss_thin_interval_v1(Y, 1.0, 1.0, 0.05, ts);
    CHECK(iv.method == "gauss_thin");
    CHECK(iv.width() == doctest::Approx(5.5436152973987125).epsilon(1e-12));
    const int i = out.index();
    CHECK(i == argmax_select(Y + 1.0 * out.zeta));
    CHECK((iv.lo + iv.hi) / 2.0 ==
          doctest::Approx(Y[i] - out.zeta[i] / 1.0).epsilon(1e-12));
    RngStream bad = RngStream::derive(43, 0, "thin/bad");
    CHECK_THROWS_AS(gauss_thin_interval_v1(Y, 0.0, 1.0, 0.05, bad), std::domain_error);
}

TEST_CASE("gauss thinning covers the selected null mean marginally") {
    int covered = 0;
    const int reps = 600;
    for (int rep = 0; rep < reps; ++rep) {
        RngStream noise = RngStream::derive(47, rep, "thin/cov/noise");
        RngStream ts = RngStream::derive(47, rep, "thin/cov/zeta");
        const Eigen::VectorXd Y = sample_normal(noise, 100, 1.0);
        const auto [out, iv] = gauss_thin_interval_v1(Y, 1.0, 1.0, 0.05, ts);
        if (iv.contains(0.0)) ++covered;
    }
    const double cov = static_cast<double>(covered) / reps;
    CHECK(cov >= 0.92);
    CHECK(cov <= 0.98);
}

TEST_CASE("iw intervals are conservative for the selected null mean") {
    int covered = 0;
    const int reps = 300;
    for (int rep = 0; rep < reps; ++rep) {
        RngStream noise = RngStream::derive(53, rep, "iw/cov/noise");
        RngStream sel = RngStream::derive(53, rep, "iw/cov/select");
        const Eigen::VectorXd Y = sample_normal(noise, 100, 1.0);
        const SelectionOutcome out = select_v1(Y, 1.2247, sel);
        if (iw_interval_v1(Y, out, 0.05, 1.2247, 1.0).contains(0.0)) ++covered;
    }
    CHECK(static_cast<double>(covered) / reps >= 0.92);
}

TEST_CASE("bias lower bound closed form") {
    CHECK(bias_lower_bound(100, 0.0, 1.0) ==
          doctest::Approx(1.0729830131446736).epsilon(1e-12));
    CHECK(bias_lower_bound(1, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bias_lower_bound(100, 0.25, 1.0) > bias_lower_bound(100, 1.0, 1.0));
    CHECK(bias_lower_bound(100, 1.0, 1.0) > bias_lower_bound(100, 2.0, 1.0));
    CHECK(bias_lower_bound(100, 1.0, 2.0) ==
          doctest::Approx(2.0 * bias_lower_bound(100, 1.0, 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bias_lower_bound(0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bias_lower_bound(10, -0.5, 1.0), std::domain_error);
}

}  // TEST_SUITE
