#ifndef COLIBRI_METRICS_HPP
#define COLIBRI_METRICS_HPP

#include <string>
#include <vector>

#include "colibri/votes.hpp"

namespace colibri {

/// Subjects x categories assignment counts with a constant number of raters
/// per subject.
struct RatingMatrix {
    std::vector<std::vector<double>> counts;

    /// Throws when cells are negative, rows are ragged, or row sums differ.
    void validate() const;
    double raters_per_subject() const; // n
};

struct FleissResult {
    double kappa = 0.0;
    bool degenerate = false; // expected agreement was 1; kappa reported as 1
};

/// Chance-corrected multi-rater agreement,
/// kappa = (Pbar - Pbar_e) / (1 - Pbar_e). Requires n >= 2 raters.
FleissResult fleiss_kappa(const RatingMatrix& m);

/// Strength-of-agreement band for a kappa value
/// (Poor / Slight / Fair / Moderate / Substantial / Almost perfect).
std::string kappa_band(double kappa);

/// Jensen-Shannon divergence with log base 2, bounded in [0,1]; 0 for
/// identical distributions. Inputs are rescaled to sum to 1 when they do not
/// already.
double jensen_shannon(const std::vector<double>& p, const std::vector<double>& q);

double cosine_similarity(const std::vector<double>& p, const std::vector<double>& q);
double pearson(const std::vector<double>& p, const std::vector<double>& q);

/// Coherence between two empirical membership tables over the same stimuli
/// and labels (e.g. main vs. alternative hue surveys). The comparison vectors
/// concatenate the per-stimulus label shares of each table; per-stimulus JSD
/// surfaces the least coherent stimuli.
struct CoherenceReport {
    double jsd = 0.0;
    double cosine = 0.0;
    double pearson = 0.0;
    // (stimulus, per-stimulus JSD), sorted worst first
    std::vector<std::pair<double, double>> per_stimulus;
};

CoherenceReport coherence_report(const EmpiricalMembership& a, const EmpiricalMembership& b);

} // namespace colibri

#endif
