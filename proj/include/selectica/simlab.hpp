#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "selectica/rng.hpp"

namespace selectica {

enum class Vignette { v1, v2, v3 };

std::string vignette_tag(Vignette v);

// Sparse exponential signal description; sparsity 1 (or mean 0) is the null.
struct SignalSpec {
    double exp_mean = 0.0;
    double sparsity = 1.0;
};

struct ExperimentConfig {
    Vignette vignette = Vignette::v1;
    int n = 100;
    int p = 100;
    double rho = 0.5;
    SignalSpec signal;
    std::vector<double> c_grid;
    double alpha = 0.05;
    int replicates = 250;
    std::uint64_t master_seed = 1;
    std::vector<std::string> methods;
    double sigma = 1.0;
    int cv_folds = 3;
    bool mu_equals_phi = false;  // target the raw signal phi, not X*phi (requires n == p)
    int threads = 1;
};

enum class RunStatus { ok, infinite, empty_selection, degenerate };

std::string status_tag(RunStatus s);

// One replicate of one method: the CSV row.
struct RunRecord {
    std::string vignette;
    std::string method;
    int n;
    int p;
    double c;
    double alpha;
    int rep;
    double lower;
    double upper;
    double width;
    double target;
    bool covered;
    RunStatus status;
    std::string seed_label;
};

// Design with equicorrelated rows (shared scalar + independent noise),
// columns rescaled to unit norm.
Eigen::MatrixXd gen_design(int n, int p, double rho, RngStream& stream);

// ceil(sparsity*p) randomly chosen coordinates zero, the rest Exponential
// with the given mean.
Eigen::VectorXd gen_signal(int p, double sparsity, double exp_mean, RngStream& stream);

// Runs every (c, replicate, method) cell; failures become flagged records,
// never aborts.  Output is identical for any thread count.
std::vector<RunRecord> run_grid(const ExperimentConfig& config);

struct CellSummary {
    std::string vignette;
    std::string method;
    int n;
    int p;
    double c;
    double alpha;
    int n_ok = 0;
    int n_infinite = 0;
    int n_empty = 0;
    int n_degenerate = 0;
    double mean_width = 0.0;      // over ok records
    double coverage = 0.0;        // over ok + infinite records
    double infinite_fraction = 0.0;
};

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

// Exact schema:
// vignette,method,n,p,c,alpha,rep,lower,upper,width,target,covered,status,seed_label
std::string to_csv(const std::vector<RunRecord>& records);
void write_csv(const std::vector<RunRecord>& records, const std::string& path);

}  // namespace selectica
