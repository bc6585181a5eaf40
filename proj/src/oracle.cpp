#include "selectica/oracle.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "selectica/errors.hpp"
#include "selectica/selection.hpp"
#include "selectica/stat_core.hpp"

namespace selectica {

namespace {

// |midpoint - target| for one fresh replicate, or nullopt when the
// vignette-3 pipeline selects nothing / a rank-deficient set.
std::optional<double> replicate_error(const OracleSpec& spec, std::uint64_t master_seed,
                                      const std::string& prefix, int m) {
    auto stream = [&](const char* role) {
        return RngStream::derive(master_seed, static_cast<std::uint64_t>(m),
                                 prefix + "/" + role);
    };
    switch (spec.vignette) {
        case Vignette::v1: {
            RngStream noise = stream("noise");
            RngStream select = stream("select");
            const Eigen::VectorXd Y = sample_normal(noise, spec.n, spec.sigma);
            const SelectionOutcome out = select_v1(Y, spec.c, select);
            return std::abs(Y[out.index()]);
        }
        case Vignette::v2: {
            RngStream design = stream("design");
            RngStream signal = stream("signal");
            RngStream noise = stream("noise");
            RngStream select = stream("select");
            const Eigen::MatrixXd X = gen_design(spec.n, spec.p, spec.rho, design);
            const Eigen::VectorXd phi =
                gen_signal(spec.p, spec.signal.sparsity, spec.signal.exp_mean, signal);
            const Eigen::VectorXd mu = X * phi;
            const Eigen::VectorXd Y = mu + sample_normal(noise, spec.n, spec.sigma);
            const SelectionOutcome out = select_v2(Y, X, spec.c, select);
            return std::abs(X.col(out.index()).dot(Y - mu));
        }
        case Vignette::v3: {
            RngStream design = stream("design");
            RngStream signal = stream("signal");
            RngStream noise = stream("noise");
            RngStream select = stream("select");
            const Eigen::MatrixXd X = gen_design(spec.n, spec.p, spec.rho, design);
            const Eigen::VectorXd phi =
                gen_signal(spec.p, spec.signal.sparsity, spec.signal.exp_mean, signal);
            const Eigen::VectorXd mu = X * phi;
            const Eigen::VectorXd Y = mu + sample_normal(noise, spec.n, spec.sigma);
            SelectionOutcome out;
            try {
                out = select_v3(Y, X, spec.c, spec.sigma, select, spec.cv_folds);
            } catch (const EmptySelection&) {
                return std::nullopt;
            }
            const int s = static_cast<int>(out.selected.size());
            Eigen::MatrixXd Xs(X.rows(), s);
            for (int k = 0; k < s; ++k) Xs.col(k) = X.col(out.selected[k]);
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
            if (qr.rank() < s) return std::nullopt;
            const double mid = qr.solve(Y)[0];
            const double target = qr.solve(mu)[0];
            return std::abs(mid - target);
        }
    }
    throw std::logic_error("replicate_error: unknown vignette");
}

void validate(const OracleSpec& spec) {
    if (spec.replicates < 1000)
        throw std::invalid_argument("oracle: need at least 1000 replicates");
    if (spec.levels.empty())
        throw std::invalid_argument("oracle: need at least one level");
    for (double q : spec.levels)
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("oracle: levels must lie in (0,1)");
}

}  // namespace

OracleResult oracle_halfwidth(const OracleSpec& spec, std::uint64_t master_seed) {
    validate(spec);
    const std::string prefix = "oracle/" + vignette_tag(spec.vignette);
    std::vector<double> errors;
    errors.reserve(spec.replicates);
    int skipped = 0;
    for (int m = 0; m < spec.replicates; ++m) {
        if (auto e = replicate_error(spec, master_seed, prefix, m))
            errors.push_back(*e);
        else
            ++skipped;
    }
    if (errors.empty())
        throw std::runtime_error("oracle_halfwidth: every replicate was skipped");
    std::sort(errors.begin(), errors.end());
    const auto size = static_cast<double>(errors.size());
    OracleResult result;
    result.skipped = skipped;
    for (double q : spec.levels) {
        auto idx = static_cast<long>(std::ceil(q * size)) - 1;
        idx = std::clamp<long>(idx, 0, static_cast<long>(errors.size()) - 1);
        result.halfwidth[q] = errors[idx];
    }
    return result;
}

std::map<double, double> oracle_coverage_check(const OracleSpec& spec,
                                               const std::map<double, double>& halfwidths,
                                               std::uint64_t master_seed) {
    validate(spec);
    const std::string prefix = "oracle-check/" + vignette_tag(spec.vignette);
    std::map<double, long> hits;
    for (const auto& [q, hw] : halfwidths) hits[q] = 0;
    long kept = 0;
    for (int m = 0; m < spec.replicates; ++m) {
        const auto e = replicate_error(spec, master_seed, prefix, m);
        if (!e) continue;
        ++kept;
        for (const auto& [q, hw] : halfwidths)
            if (*e <= hw) ++hits[q];
    }
    if (kept == 0)
        throw std::runtime_error("oracle_coverage_check: every replicate was skipped");
    std::map<double, double> coverage;
    for (const auto& [q, count] : hits)
        coverage[q] = static_cast<double>(count) / static_cast<double>(kept);
    return coverage;
}

}  // namespace selectica
