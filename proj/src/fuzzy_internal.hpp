#ifndef COLIBRI_FUZZY_INTERNAL_HPP
#define COLIBRI_FUZZY_INTERNAL_HPP

#include <vector>

#include "colibri/fuzzy.hpp"

namespace colibri::detail {

// Piecewise evaluation without domain handling; assumes a valid shape.
double eval_raw(const MembershipFunction& mf, double x);

// Canonicalizes x into the domain, then evaluates; circular domains try
// x +/- period so sets stored unwrapped past the bounds work.
double eval_on(const MembershipFunction& mf, const Domain& domain, double x);

// Number of cut points the shape list consumes on this domain.
// Throws ArityMismatch for shape lists no cut vector can satisfy.
std::size_t partition_cut_count(const Domain& domain, const std::vector<SetShape>& shapes);

// Maps cuts + shapes to membership functions per the generic cut-point
// mapping (shared transition edges). Appends k functions to out. Performs the
// arity walk but no Ruspini probe; throws ArityMismatch on inconsistency.
// Used by partition_from_cuts and by the grid-search hot path so both build
// bit-identical parameters.
void build_partition_mfs(const Domain& domain, const std::vector<SetShape>& shapes,
                         const std::vector<double>& cuts, std::vector<MembershipFunction>& out);

} // namespace colibri::detail

#endif
