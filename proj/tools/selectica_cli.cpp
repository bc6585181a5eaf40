#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "selectica/errors.hpp"
#include "selectica/lasso_dt.hpp"
#include "selectica/max_contrast.hpp"
#include "selectica/oracle.hpp"
#include "selectica/selection.hpp"
#include "selectica/simlab.hpp"
#include "selectica/stat_core.hpp"
#include "selectica/winners_curse.hpp"

namespace {

using namespace selectica;

int env_threads_default() {
    if (const char* s = std::getenv("SELECTICA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 1) return static_cast<int>(v);
    }
    return 1;
}

Vignette parse_vignette(const std::string& tag) {
    if (tag == "v1") return Vignette::v1;
    if (tag == "v2") return Vignette::v2;
    return Vignette::v3;
}

struct GridArgs {
    int n = 100;
    int p = 100;
    std::vector<double> c_grid;
    std::vector<double> noise_var;
    double alpha = 0.05;
    int reps = 250;
    double signal_mean = 0.0;
    double sparsity = 1.0;
    double rho = 0.5;
    std::vector<std::string> methods;
    std::uint64_t seed = 1;
    std::string out;
    int threads = env_threads_default();
    int cv_folds = 3;
    bool mu_eq_phi = false;
};

CLI::App* add_grid_subcommand(CLI::App& app, const std::string& name,
                              const std::string& desc, GridArgs& a) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--n", a.n, "observations per replicate");
    sub->add_option("--p", a.p, "design columns (vignettes 2-3)");
    CLI::Option_group* scale = sub->add_option_group("noise scale");
    scale->add_option("--c-grid", a.c_grid, "randomization scale grid (c)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    scale->add_option("--noise-var", a.noise_var,
                      "randomization variance grid: 2c^2 for v1/v2, c^2 for v3")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    scale->require_option(1);
    sub->add_option("--alpha", a.alpha, "miscoverage level");
    sub->add_option("--reps", a.reps, "replicates per grid cell");
    sub->add_option("--signal-mean", a.signal_mean, "exponential mean of nonzero signals");
    sub->add_option("--sparsity", a.sparsity, "fraction of zero signal coordinates");
    sub->add_option("--rho", a.rho, "design row equicorrelation");
    sub->add_option("--methods", a.methods, "subset of the vignette's methods");
    sub->add_option("--seed", a.seed, "master seed");
    sub->add_option("--out", a.out, "output CSV path")->required();
    sub->add_option("--threads", a.threads, "worker threads (env SELECTICA_THREADS)");
    return sub;
}

void print_summaries(const std::vector<RunRecord>& records) {
    std::cout << std::setprecision(6);
    for (const CellSummary& s : summarize(records)) {
        std::cout << s.vignette << " " << s.method << "  n=" << s.n << " p=" << s.p
                  << " c=" << s.c << " alpha=" << s.alpha << "  ok=" << s.n_ok
                  << " infinite=" << s.n_infinite << " empty=" << s.n_empty
                  << " degenerate=" << s.n_degenerate << "  mean_width=" << s.mean_width
                  << " coverage=" << s.coverage << "\n";
    }
}

int run_grid_cmd(Vignette v, const GridArgs& a) {
    ExperimentConfig cfg;
    cfg.vignette = v;
    cfg.n = a.n;
    cfg.p = a.p;
    cfg.rho = a.rho;
    cfg.signal = {a.signal_mean, a.sparsity};
    cfg.alpha = a.alpha;
    cfg.replicates = a.reps;
    cfg.master_seed = a.seed;
    cfg.methods = a.methods;
    cfg.cv_folds = a.cv_folds;
    cfg.mu_equals_phi = a.mu_eq_phi;
    cfg.threads = a.threads;
    if (!a.noise_var.empty()) {
        for (double var : a.noise_var)
            cfg.c_grid.push_back(v == Vignette::v3 ? std::sqrt(var) : std::sqrt(var / 2.0));
    } else {
        cfg.c_grid = a.c_grid;
    }
    const std::vector<RunRecord> records = run_grid(cfg);
    write_csv(records, a.out);
    print_summaries(records);
    std::cout << "wrote " << records.size() << " records to " << a.out << "\n";
    return 0;
}

struct OracleArgs {
    std::string vignette;
    std::vector<double> coverage_grid = {0.95};
    int m = 10000;
    std::uint64_t seed = 1;
    std::string out;
    int n = 100;
    int p = 100;
    double c = 1.0;
    double rho = 0.5;
    double signal_mean = 0.0;
    double sparsity = 1.0;
    int cv_folds = 3;
};

int run_oracle_cmd(const OracleArgs& a) {
    OracleSpec spec;
    spec.vignette = parse_vignette(a.vignette);
    spec.n = a.n;
    spec.p = a.p;
    spec.rho = a.rho;
    spec.signal = {a.signal_mean, a.sparsity};
    spec.c = a.c;
    spec.replicates = a.m;
    spec.levels = a.coverage_grid;
    spec.cv_folds = a.cv_folds;
    const OracleResult res = oracle_halfwidth(spec, a.seed);
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot open " + a.out);
    f << std::setprecision(17) << "level,halfwidth\n";
    std::cout << std::setprecision(6);
    for (const auto& [q, hw] : res.halfwidth) {
        f << q << "," << hw << "\n";
        std::cout << "level " << q << ": halfwidth " << hw << "\n";
    }
    if (!f) throw std::runtime_error("write failed for " + a.out);
    std::cout << "skipped replicates: " << res.skipped << "\n";
    std::cout << "wrote " << res.halfwidth.size() << " levels to " << a.out << "\n";
    return 0;
}

void print_interval(const char* name, const Interval& iv, double target) {
    std::cout << "  " << name << ": [" << iv.lo << ", " << iv.hi << "]  width "
              << iv.width() << "  covers target: " << (iv.contains(target) ? "yes" : "no")
              << "\n";
}

Interval classical(double mid, double sd, double alpha) {
    const double hw = sd * (-normal_quantile(0.5 * alpha));
    return {mid - hw, mid + hw, 1.0 - alpha, "classical", mid};
}

void demo_v1(std::uint64_t seed) {
    const int n = 10;
    const double c = 1.2247, alpha = 0.05, sigma = 1.0;
    RngStream noise = RngStream::derive(seed, 0, "demo/v1/noise");
    RngStream sel = RngStream::derive(seed, 0, "demo/v1/select");
    RngStream thin_stream = RngStream::derive(seed, 0, "demo/v1/thin");
    const Eigen::VectorXd Y = sample_normal(noise, n, sigma);
    const SelectionOutcome out = select_v1(Y, c, sel);
    std::cout << "winner's curse: n=" << n << " c=" << c << " alpha=" << alpha
              << " mu=0\n";
    std::cout << "Y     = " << Y.transpose() << "\n";
    std::cout << "zeta  = " << out.zeta.transpose() << "\n";
    std::cout << "selected index " << out.index() << " (argmax of Y+zeta), Y_sel = "
              << Y[out.index()] << ", delta_sel = " << out.delta[out.index()] << "\n";
    std::cout << "target mu_sel = 0\n";
    print_interval("classical ", classical(Y[out.index()], sigma, alpha), 0.0);
    if (auto t = iw_tuning_v1(alpha, n, c))
        std::cout << "  iw tuning: eta=" << t->eta << " nu=" << t->nu
                  << " adjusted level=" << t->adjusted_level << "\n";
    else
        std::cout << "  iw tuning: level unrepresentable (infinite width)\n";
    print_interval("iw        ", iw_interval_v1(Y, out, alpha, c, sigma), 0.0);
    print_interval("fission   ", fission_interval_v1(Y, out, alpha, c, sigma), 0.0);
    const auto [gout, giv] = gauss_thin_interval_v1(Y, c, sigma, alpha, thin_stream);
    std::cout << "  gauss_thin reselects index " << gout.index() << "\n";
    print_interval("gauss_thin", giv, 0.0);
}

void demo_v2(std::uint64_t seed) {
    const int n = 10, p = 10;
    const double c = 1.2247, alpha = 0.05, sigma = 1.0, rho = 0.5;
    RngStream design = RngStream::derive(seed, 0, "demo/v2/design");
    RngStream signal = RngStream::derive(seed, 0, "demo/v2/signal");
    RngStream noise = RngStream::derive(seed, 0, "demo/v2/noise");
    RngStream sel = RngStream::derive(seed, 0, "demo/v2/select");
    const Eigen::MatrixXd X = gen_design(n, p, rho, design);
    const Eigen::VectorXd phi = gen_signal(p, 0.8, 2.0, signal);
    const Eigen::VectorXd mu = X * phi;
    const Eigen::VectorXd Y = mu + sample_normal(noise, n, sigma);
    const SelectionOutcome out = select_v2(Y, X, c, sel);
    const int j = out.index();
    const double stat = X.col(j).dot(Y);
    const Eigen::VectorXd W = Y - X.col(j) * stat;
    const PolyhedralEvent ev{build_A(p, j), out.delta[0], out.zeta, W, j};
    const TruncationLimits lim = truncation_limits(ev, X, Y);
    const double target = X.col(j).dot(mu);
    std::cout << "maximal contrast: n=" << n << " p=" << p << " c=" << c
              << " alpha=" << alpha << " rho=" << rho << "\n";
    std::cout << "zeta  = " << out.zeta.transpose() << "\n";
    std::cout << "selected column " << j << " (argmax of |X_j'Y+zeta_j|), X_j'Y = "
              << stat << ", delta = " << out.delta[0] << "\n";
    std::cout << "truncation [v_min, v_max] = [" << lim.v_min << ", " << lim.v_max
              << "]\n";
    std::cout << "target X_j'mu = " << target << "\n";
    print_interval("classical", classical(stat, sigma, alpha), target);
    if (auto t = iw_tuning_v2(alpha, p, c))
        std::cout << "  iw tuning: eta=" << t->eta << " nu=" << t->nu
                  << " adjusted level=" << t->adjusted_level << "\n";
    else
        std::cout << "  iw tuning: level unrepresentable (infinite width)\n";
    print_interval("iw       ", iw_interval_v2(Y, X, out, alpha, c, sigma), target);
    print_interval("rcsi     ", rcsi_interval_v2(Y, X, out, alpha, sigma), target);
}

void demo_v3(std::uint64_t seed) {
    const int n = 25, p = 8;
    const double c = 1.0, alpha = 0.05, sigma = 1.0, rho = 0.5;
    RngStream design = RngStream::derive(seed, 0, "demo/v3/design");
    RngStream signal = RngStream::derive(seed, 0, "demo/v3/signal");
    RngStream noise = RngStream::derive(seed, 0, "demo/v3/noise");
    RngStream sel = RngStream::derive(seed, 0, "demo/v3/select");
    const Eigen::MatrixXd X = gen_design(n, p, rho, design);
    const Eigen::VectorXd phi = gen_signal(p, 0.5, 2.0, signal);
    const Eigen::VectorXd mu = X * phi;
    const Eigen::VectorXd Y = mu + sample_normal(noise, n, sigma);
    std::cout << "lasso + data thinning: n=" << n << " p=" << p << " c=" << c
              << " alpha=" << alpha << " rho=" << rho << "\n";
    std::cout << "phi   = " << phi.transpose() << "\n";
    SelectionOutcome out;
    try {
        out = select_v3(Y, X, c, sigma, sel);
    } catch (const EmptySelection&) {
        std::cout << "lasso on the thinned training response selected nothing\n";
        return;
    }
    std::cout << "selected columns (by |beta| desc):";
    for (int k : out.selected) std::cout << " " << k;
    std::cout << "\n";
    const int s = static_cast<int>(out.selected.size());
    Eigen::MatrixXd Xs(n, s);
    for (int k = 0; k < s; ++k) Xs.col(k) = X.col(out.selected[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    if (qr.rank() < s) {
        std::cout << "selected columns are rank deficient; no interval\n";
        return;
    }
    const double target = qr.solve(mu)[0];
    const Eigen::MatrixXd Ginv = (Xs.transpose() * Xs).inverse();
    std::cout << "target (first projected coefficient) = " << target << "\n";
    print_interval("classical",
                   classical(qr.solve(Y)[0], sigma * std::sqrt(Ginv(0, 0)), alpha),
                   target);
    print_interval("dt       ", dt_interval(Y, X, out, c, alpha, sigma), target);
}

int run_demo_cmd(const std::string& vtag, std::uint64_t seed) {
    std::cout << std::setprecision(6);
    switch (parse_vignette(vtag)) {
        case Vignette::v1: demo_v1(seed); break;
        case Vignette::v2: demo_v2(seed); break;
        case Vignette::v3: demo_v3(seed); break;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"selectica: infer-and-widen vs conditional selective inference lab"};
    app.require_subcommand(1);

    GridArgs a1, a2, a3;
    CLI::App* sub_v1 = add_grid_subcommand(app, "v1", "winner's curse grid", a1);
    CLI::App* sub_v2 = add_grid_subcommand(app, "v2", "maximal contrast grid", a2);
    CLI::App* sub_v3 = add_grid_subcommand(app, "v3", "lasso + data thinning grid", a3);
    sub_v2->add_flag("--mu-eq-phi", a2.mu_eq_phi, "target the raw signal (requires n == p)");
    sub_v3->add_option("--cv-folds", a3.cv_folds, "cross-validation folds");

    OracleArgs oa;
    CLI::App* sub_oracle = app.add_subcommand("oracle", "Monte-Carlo narrowest-interval baseline");
    sub_oracle->add_option("--vignette", oa.vignette, "v1|v2|v3")
        ->required()
        ->check(CLI::IsMember({"v1", "v2", "v3"}));
    sub_oracle->add_option("--coverage-grid", oa.coverage_grid, "levels in (0,1)")
        ->delimiter(',');
    sub_oracle->add_option("--m", oa.m, "Monte-Carlo replicates (>= 1000)");
    sub_oracle->add_option("--seed", oa.seed, "master seed");
    sub_oracle->add_option("--out", oa.out, "output CSV path")->required();
    sub_oracle->add_option("--n", oa.n, "observations per replicate");
    sub_oracle->add_option("--p", oa.p, "design columns");
    sub_oracle->add_option("--c", oa.c, "randomization scale")->check(CLI::PositiveNumber);
    sub_oracle->add_option("--rho", oa.rho, "design row equicorrelation");
    sub_oracle->add_option("--signal-mean", oa.signal_mean, "exponential mean of nonzero signals");
    sub_oracle->add_option("--sparsity", oa.sparsity, "fraction of zero signal coordinates");
    sub_oracle->add_option("--cv-folds", oa.cv_folds, "cross-validation folds (v3)");

    std::string demo_vignette;
    std::uint64_t demo_seed = 1;
    CLI::App* sub_demo = app.add_subcommand("demo", "print one worked replicate");
    sub_demo->add_option("--vignette", demo_vignette, "v1|v2|v3")
        ->required()
        ->check(CLI::IsMember({"v1", "v2", "v3"}));
    sub_demo->add_option("--seed", demo_seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sub_v1->parsed()) return run_grid_cmd(Vignette::v1, a1);
        if (sub_v2->parsed()) return run_grid_cmd(Vignette::v2, a2);
        if (sub_v3->parsed()) return run_grid_cmd(Vignette::v3, a3);
        if (sub_oracle->parsed()) return run_oracle_cmd(oa);
        if (sub_demo->parsed()) return run_demo_cmd(demo_vignette, demo_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
