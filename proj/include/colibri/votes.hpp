#ifndef COLIBRI_VOTES_HPP
#define COLIBRI_VOTES_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace colibri {

/// Per-stimulus response counts from a categorization survey.
/// counts[i][j] is the number of respondents who classified stimulus i as
/// label j; totals[i] is the number of respondents evaluating stimulus i.
/// Single-label surveys satisfy sum_j counts[i][j] == totals[i].
struct VoteTable {
    std::vector<double> stimuli; // ascending, domain units
    std::vector<std::string> labels;
    std::vector<std::vector<double>> counts;
    std::vector<double> totals;
    bool single_label = true;
};

/// Empirical membership degrees mu[i][j] = counts[i][j] / totals[i].
struct EmpiricalMembership {
    std::vector<double> stimuli;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> mu;
};

/// Raw membership from vote shares. Throws ZeroTotal when a stimulus has no
/// evaluations.
EmpiricalMembership votes_to_membership(const VoteTable& v);

// CSV matrices with stimuli as rows:
//   votes:      stimulus,<label...>,total
//   membership: stimulus,<label...>
void write_votes_csv(const VoteTable& v, std::ostream& os);
VoteTable read_votes_csv(std::istream& is);
void write_membership_csv(const EmpiricalMembership& m, std::ostream& os);
EmpiricalMembership read_membership_csv(std::istream& is);

} // namespace colibri

#endif
