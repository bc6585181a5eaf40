#include "selectica/simlab.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "selectica/errors.hpp"
#include "selectica/lasso_dt.hpp"
#include "selectica/max_contrast.hpp"
#include "selectica/selection.hpp"
#include "selectica/stat_core.hpp"
#include "selectica/winners_curse.hpp"

namespace selectica {

std::string vignette_tag(Vignette v) {
    switch (v) {
        case Vignette::v1: return "v1";
        case Vignette::v2: return "v2";
        case Vignette::v3: return "v3";
    }
    throw std::logic_error("vignette_tag: unknown vignette");
}

std::string status_tag(RunStatus s) {
    switch (s) {
        case RunStatus::ok: return "ok";
        case RunStatus::infinite: return "infinite";
        case RunStatus::empty_selection: return "empty_selection";
        case RunStatus::degenerate: return "degenerate";
    }
    throw std::logic_error("status_tag: unknown status");
}

Eigen::MatrixXd gen_design(int n, int p, double rho, RngStream& stream) {
    if (n < 1 || p < 1) throw std::domain_error("gen_design: n and p must be positive");
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::domain_error("gen_design: rho must lie in [0,1)");
    const double a = std::sqrt(rho);
    const double b = std::sqrt(1.0 - rho);
    Eigen::MatrixXd X(n, p);
    for (;;) {
        for (int i = 0; i < n; ++i) {
            const double shared = draw_normal(stream, 1.0);
            for (int j = 0; j < p; ++j)
                X(i, j) = a * shared + b * draw_normal(stream, 1.0);
        }
        bool ok = true;
        for (int j = 0; j < p && ok; ++j) {
            const double norm = X.col(j).norm();
            if (norm > 0.0)
                X.col(j) /= norm;
            else
                ok = false;  // astronomically unlikely; redraw the matrix
        }
        if (ok) return X;
    }
}

Eigen::VectorXd gen_signal(int p, double sparsity, double exp_mean, RngStream& stream) {
    if (p < 1) throw std::domain_error("gen_signal: p must be positive");
    if (!(sparsity >= 0.0 && sparsity <= 1.0))
        throw std::domain_error("gen_signal: sparsity must lie in [0,1]");
    const int n_zero = static_cast<int>(std::ceil(sparsity * p));
    if (n_zero < p && !(exp_mean > 0.0))
        throw std::domain_error("gen_signal: nonzero coordinates need a positive mean");
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = p - 1; i > 0; --i) {
        const int j = std::min(i, static_cast<int>(stream.uniform01() * (i + 1)));
        std::swap(perm[i], perm[j]);
    }
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(p);
    for (int k = n_zero; k < p; ++k)
        phi[perm[k]] = -exp_mean * std::log(stream.uniform01());
    return phi;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> default_methods(Vignette v) {
    switch (v) {
        case Vignette::v1: return {"classical", "iw", "fission", "gauss_thin"};
        case Vignette::v2: return {"classical", "iw", "rcsi"};
        case Vignette::v3: return {"classical", "dt"};
    }
    throw std::logic_error("default_methods: unknown vignette");
}

void validate_config(const ExperimentConfig& cfg, const std::vector<std::string>& methods) {
    if (cfg.n < 1) throw std::invalid_argument("run_grid: n must be positive");
    if (cfg.vignette != Vignette::v1 && cfg.p < 1)
        throw std::invalid_argument("run_grid: p must be positive");
    if (cfg.c_grid.empty()) throw std::invalid_argument("run_grid: c grid is empty");
    for (double c : cfg.c_grid)
        if (!(c > 0.0)) throw std::invalid_argument("run_grid: c values must be positive");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("run_grid: alpha must lie in (0,1)");
    if (cfg.replicates < 1) throw std::invalid_argument("run_grid: need replicates >= 1");
    if (!(cfg.sigma > 0.0)) throw std::invalid_argument("run_grid: sigma must be positive");
    if (cfg.vignette != Vignette::v1 && !(cfg.rho >= 0.0 && cfg.rho < 1.0))
        throw std::invalid_argument("run_grid: rho must lie in [0,1)");
    if (cfg.vignette == Vignette::v3 && cfg.cv_folds < 2)
        throw std::invalid_argument("run_grid: cv_folds must be >= 2");
    if (cfg.mu_equals_phi) {
        if (cfg.vignette != Vignette::v2)
            throw std::invalid_argument("run_grid: mu_equals_phi is a maximal-contrast option");
        if (cfg.n != cfg.p)
            throw std::invalid_argument("run_grid: mu_equals_phi requires n == p");
    }
    const std::vector<std::string> allowed = default_methods(cfg.vignette);
    for (const auto& m : methods)
        if (std::find(allowed.begin(), allowed.end(), m) == allowed.end())
            throw std::invalid_argument("run_grid: method '" + m + "' not defined for vignette " +
                                        vignette_tag(cfg.vignette));
}

RunRecord base_record(const ExperimentConfig& cfg, const std::string& method, double c,
                      int rep, const std::string& seed_label) {
    RunRecord r;
    r.vignette = vignette_tag(cfg.vignette);
    r.method = method;
    r.n = cfg.n;
    r.p = (cfg.vignette == Vignette::v1) ? cfg.n : cfg.p;
    r.c = c;
    r.alpha = cfg.alpha;
    r.rep = rep;
    r.lower = kNan;
    r.upper = kNan;
    r.width = kNan;
    r.target = kNan;
    r.covered = false;
    r.status = RunStatus::degenerate;
    r.seed_label = seed_label;
    return r;
}

void fill_ok(RunRecord& r, const Interval& iv, double target) {
    r.lower = iv.lo;
    r.upper = iv.hi;
    r.target = target;
    r.covered = iv.contains(target);
    if (iv.infinite()) {
        r.width = kInf;
        r.status = RunStatus::infinite;
    } else {
        r.width = iv.width();
        r.status = RunStatus::ok;
    }
}

Interval classical_interval(double mid, double sd, double alpha) {
    const double hw = sd * (-normal_quantile(0.5 * alpha));
    return {mid - hw, mid + hw, 1.0 - alpha, "classical", mid};
}

struct TaskContext {
    const ExperimentConfig& cfg;
    const std::vector<std::string>& methods;
    std::vector<RunRecord>& records;
};

void run_task(const TaskContext& ctx, int ci, int rep) {
    const ExperimentConfig& cfg = ctx.cfg;
    const double c = cfg.c_grid[ci];
    const std::string base = vignette_tag(cfg.vignette) + "/c" + std::to_string(ci);
    const std::string seed_label = base + "/r" + std::to_string(rep);
    auto stream = [&](const char* role) {
        return RngStream::derive(cfg.master_seed, static_cast<std::uint64_t>(rep),
                                 base + "/" + role);
    };
    const std::size_t slot0 =
        (static_cast<std::size_t>(ci) * cfg.replicates + rep) * ctx.methods.size();
    for (std::size_t mi = 0; mi < ctx.methods.size(); ++mi)
        ctx.records[slot0 + mi] = base_record(cfg, ctx.methods[mi], c, rep, seed_label);
    auto rec = [&](std::size_t mi) -> RunRecord& { return ctx.records[slot0 + mi]; };

    switch (cfg.vignette) {
        case Vignette::v1: {
            RngStream noise = stream("noise");
            const Eigen::VectorXd Y = sample_normal(noise, cfg.n, cfg.sigma);
            std::optional<SelectionOutcome> shared;  // mu = 0; target always 0
            auto shared_out = [&]() -> const SelectionOutcome& {
                if (!shared) {
                    RngStream sel = stream("select");
                    shared = select_v1(Y, c, sel);
                }
                return *shared;
            };
            for (std::size_t mi = 0; mi < ctx.methods.size(); ++mi) {
                const std::string& m = ctx.methods[mi];
                if (m == "classical") {
                    fill_ok(rec(mi),
                            classical_interval(Y[shared_out().index()], cfg.sigma, cfg.alpha),
                            0.0);
                } else if (m == "iw") {
                    fill_ok(rec(mi), iw_interval_v1(Y, shared_out(), cfg.alpha, c, cfg.sigma),
                            0.0);
                } else if (m == "fission") {
                    try {
                        fill_ok(rec(mi),
                                fission_interval_v1(Y, shared_out(), cfg.alpha, c, cfg.sigma),
                                0.0);
                    } catch (const RootNotBracketed&) {
                        rec(mi).status = RunStatus::degenerate;
                    } catch (const DegenerateTruncation&) {
                        rec(mi).status = RunStatus::degenerate;
                    }
                } else {  // gauss_thin
                    RngStream ts = stream("thin");
                    const auto [gout, iv] =
                        gauss_thin_interval_v1(Y, c, cfg.sigma, cfg.alpha, ts);
                    fill_ok(rec(mi), iv, 0.0);
                }
            }
            return;
        }
        case Vignette::v2: {
            RngStream design = stream("design");
            RngStream signal = stream("signal");
            RngStream noise = stream("noise");
            RngStream sel = stream("select");
            const Eigen::MatrixXd X = gen_design(cfg.n, cfg.p, cfg.rho, design);
            const Eigen::VectorXd phi =
                gen_signal(cfg.p, cfg.signal.sparsity, cfg.signal.exp_mean, signal);
            const Eigen::VectorXd mu =
                cfg.mu_equals_phi ? phi : Eigen::VectorXd(X * phi);
            const Eigen::VectorXd Y = mu + sample_normal(noise, cfg.n, cfg.sigma);
            const SelectionOutcome out = select_v2(Y, X, c, sel);
            const double target = X.col(out.index()).dot(mu);
            for (std::size_t mi = 0; mi < ctx.methods.size(); ++mi) {
                const std::string& m = ctx.methods[mi];
                if (m == "classical") {
                    fill_ok(rec(mi),
                            classical_interval(X.col(out.index()).dot(Y), cfg.sigma, cfg.alpha),
                            target);
                } else if (m == "iw") {
                    fill_ok(rec(mi), iw_interval_v2(Y, X, out, cfg.alpha, c, cfg.sigma),
                            target);
                } else {  // rcsi
                    try {
                        fill_ok(rec(mi), rcsi_interval_v2(Y, X, out, cfg.alpha, cfg.sigma),
                                target);
                    } catch (const RootNotBracketed&) {
                        rec(mi).status = RunStatus::degenerate;
                    } catch (const DegenerateTruncation&) {
                        rec(mi).status = RunStatus::degenerate;
                    }
                }
            }
            return;
        }
        case Vignette::v3: {
            RngStream design = stream("design");
            RngStream signal = stream("signal");
            RngStream noise = stream("noise");
            RngStream sel = stream("select");
            const Eigen::MatrixXd X = gen_design(cfg.n, cfg.p, cfg.rho, design);
            const Eigen::VectorXd phi =
                gen_signal(cfg.p, cfg.signal.sparsity, cfg.signal.exp_mean, signal);
            const Eigen::VectorXd mu = X * phi;
            const Eigen::VectorXd Y = mu + sample_normal(noise, cfg.n, cfg.sigma);
            SelectionOutcome out;
            try {
                out = select_v3(Y, X, c, cfg.sigma, sel, cfg.cv_folds);
            } catch (const EmptySelection&) {
                for (std::size_t mi = 0; mi < ctx.methods.size(); ++mi)
                    rec(mi).status = RunStatus::empty_selection;
                return;
            }
            const int s = static_cast<int>(out.selected.size());
            Eigen::MatrixXd Xs(X.rows(), s);
            for (int k = 0; k < s; ++k) Xs.col(k) = X.col(out.selected[k]);
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
            if (qr.rank() < s) {
                for (std::size_t mi = 0; mi < ctx.methods.size(); ++mi)
                    rec(mi).status = RunStatus::degenerate;
                return;
            }
            const double target = qr.solve(mu)[0];
            for (std::size_t mi = 0; mi < ctx.methods.size(); ++mi) {
                const std::string& m = ctx.methods[mi];
                if (m == "classical") {
                    const double mid = qr.solve(Y)[0];
                    const Eigen::MatrixXd Ginv = (Xs.transpose() * Xs).inverse();
                    fill_ok(rec(mi),
                            classical_interval(mid, cfg.sigma * std::sqrt(Ginv(0, 0)),
                                               cfg.alpha),
                            target);
                } else {  // dt
                    try {
                        fill_ok(rec(mi), dt_interval(Y, X, out, c, cfg.alpha, cfg.sigma),
                                target);
                    } catch (const SingularDesign&) {
                        rec(mi).status = RunStatus::degenerate;
                    }
                }
            }
            return;
        }
    }
    throw std::logic_error("run_task: unknown vignette");
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<RunRecord> run_grid(const ExperimentConfig& config) {
    const std::vector<std::string> methods =
        config.methods.empty() ? default_methods(config.vignette) : config.methods;
    validate_config(config, methods);
    const std::size_t n_tasks = config.c_grid.size() * static_cast<std::size_t>(config.replicates);
    std::vector<RunRecord> records(n_tasks * methods.size());
    TaskContext ctx{config, methods, records};
    const int threads = std::max(1, config.threads);
    const auto reps = static_cast<std::size_t>(config.replicates);
    if (threads == 1) {
        for (std::size_t t = 0; t < n_tasks; ++t)
            run_task(ctx, static_cast<int>(t / reps), static_cast<int>(t % reps));
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= n_tasks) return;
                run_task(ctx, static_cast<int>(t / reps), static_cast<int>(t % reps));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
    using Key = std::tuple<std::string, std::string, int, int, double, double>;
    struct Acc {
        long n_ok = 0, n_inf = 0, n_empty = 0, n_degen = 0, covered = 0;
        double width_sum = 0.0;
    };
    std::map<Key, std::size_t> index;
    std::vector<CellSummary> cells;
    std::vector<Acc> accs;
    for (const auto& r : records) {
        const Key key{r.vignette, r.method, r.n, r.p, r.c, r.alpha};
        auto it = index.find(key);
        std::size_t i;
        if (it == index.end()) {
            i = cells.size();
            index.emplace(key, i);
            CellSummary cs;
            cs.vignette = r.vignette;
            cs.method = r.method;
            cs.n = r.n;
            cs.p = r.p;
            cs.c = r.c;
            cs.alpha = r.alpha;
            cells.push_back(std::move(cs));
            accs.emplace_back();
        } else {
            i = it->second;
        }
        Acc& a = accs[i];
        switch (r.status) {
            case RunStatus::ok:
                ++a.n_ok;
                a.width_sum += r.width;
                if (r.covered) ++a.covered;
                break;
            case RunStatus::infinite:
                ++a.n_inf;
                if (r.covered) ++a.covered;
                break;
            case RunStatus::empty_selection:
                ++a.n_empty;
                break;
            case RunStatus::degenerate:
                ++a.n_degen;
                break;
        }
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Acc& a = accs[i];
        CellSummary& cs = cells[i];
        cs.n_ok = static_cast<int>(a.n_ok);
        cs.n_infinite = static_cast<int>(a.n_inf);
        cs.n_empty = static_cast<int>(a.n_empty);
        cs.n_degenerate = static_cast<int>(a.n_degen);
        cs.mean_width = a.n_ok > 0 ? a.width_sum / static_cast<double>(a.n_ok) : kNan;
        const long judged = a.n_ok + a.n_inf;
        cs.coverage = judged > 0 ? static_cast<double>(a.covered) / static_cast<double>(judged)
                                 : kNan;
        const long total = judged + a.n_empty + a.n_degen;
        cs.infinite_fraction =
            total > 0 ? static_cast<double>(a.n_inf) / static_cast<double>(total) : 0.0;
    }
    return cells;
}

std::string to_csv(const std::vector<RunRecord>& records) {
    std::string out =
        "vignette,method,n,p,c,alpha,rep,lower,upper,width,target,covered,status,seed_label\n";
    for (const auto& r : records) {
        out += r.vignette;
        out += ',';
        out += r.method;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.p);
        out += ',';
        out += fmt_double(r.c);
        out += ',';
        out += fmt_double(r.alpha);
        out += ',';
        out += std::to_string(r.rep);
        out += ',';
        out += fmt_double(r.lower);
        out += ',';
        out += fmt_double(r.upper);
        out += ',';
        out += fmt_double(r.width);
        out += ',';
        out += fmt_double(r.target);
        out += ',';
        out += r.covered ? '1' : '0';
        out += ',';
        out += status_tag(r.status);
        out += ',';
        out += r.seed_label;
        out += '\n';
    }
    return out;
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    const std::string csv = to_csv(records);
    f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!f) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace selectica
