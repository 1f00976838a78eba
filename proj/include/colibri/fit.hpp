#ifndef COLIBRI_FIT_HPP
#define COLIBRI_FIT_HPP

#include <cstdint>
#include <vector>

#include "colibri/fuzzy.hpp"
#include "colibri/votes.hpp"

namespace colibri {

/// Root-mean-square error between a partition and empirical memberships:
/// sqrt( (1/k) sum_j (1/|X|) sum_i [mu_model(j, x_i) - mu_emp(j, i)]^2 ).
/// Throws LabelMismatch when emp labels differ from the partition labels.
double partition_rmse(const FuzzyPartition& p, const EmpiricalMembership& emp);

/// Candidate interval for one cut point: lo, lo+step, ..., up to hi.
struct CutGrid {
    double lo, hi, step;
};

struct FitOptions {
    std::uint64_t budget = 100000000; // max Cartesian-product size
    unsigned threads = 0;             // 0 = hardware concurrency
};

struct FitResult {
    FuzzyPartition partition;
    CutPointVector cuts;
    double rmse = 0.0;
    std::uint64_t grid_size = 0;            // full Cartesian product
    std::uint64_t candidates_evaluated = 0; // strictly increasing candidates scored
};

/// Exhaustive grid search over the Cartesian product of per-cut candidate
/// intervals. Every strictly increasing candidate vector is scored with
/// partition_rmse; the argmin is returned, ties broken by the
/// lexicographically smallest cut vector. Deterministic regardless of thread
/// count. Throws BudgetExceeded when the grid is larger than options.budget
/// and NoValidCandidate when no grid point is strictly increasing.
FitResult fit_partition(const Domain& domain, const std::vector<std::string>& labels,
                        const std::vector<SetShape>& shapes, const std::vector<CutGrid>& grids,
                        const EmpiricalMembership& emp, const FitOptions& options = {});

} // namespace colibri

#endif
