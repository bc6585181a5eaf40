#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "selectica/simlab.hpp"

namespace selectica {

// Configuration of the Monte-Carlo narrowest-symmetric-interval baseline.
// Data are regenerated per replicate (fresh design and signal where the
// vignette uses them); the winner's-curse vignette runs at mu = 0.
struct OracleSpec {
    Vignette vignette = Vignette::v1;
    int n = 100;
    int p = 100;
    double rho = 0.5;
    SignalSpec signal;
    double sigma = 1.0;
    double c = 1.0;
    int replicates = 10000;            // M >= 1000
    std::vector<double> levels = {0.95};
    int cv_folds = 3;
};

struct OracleResult {
    std::map<double, double> halfwidth;  // level -> half-width
    int skipped = 0;                     // empty-selection replicates
};

// For each replicate simulates data, runs the vignette's selection, and
// records |midpoint - target|; the half-width at level q is the ceil(q*M)-th
// order statistic.  Bit-for-bit reproducible from (spec, master_seed).
OracleResult oracle_halfwidth(const OracleSpec& spec, std::uint64_t master_seed);

// Fresh-replicate validation of the construction: fraction of
// |midpoint - target| <= halfwidth(level).
std::map<double, double> oracle_coverage_check(const OracleSpec& spec,
                                               const std::map<double, double>& halfwidths,
                                               std::uint64_t master_seed);

}  // namespace selectica
