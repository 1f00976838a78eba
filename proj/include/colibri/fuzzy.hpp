#ifndef COLIBRI_FUZZY_HPP
#define COLIBRI_FUZZY_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace colibri {

// ---------------------------------------------------------------------------
// Membership functions
// ---------------------------------------------------------------------------

/// Linear rise a->b, peak at b, linear fall b->c. Degenerate segments
/// (a == b or b == c) are allowed.
struct Triangular {
    double a, b, c;
};

/// Linear rise a->b, plateau [b,c], linear fall c->d.
struct Trapezoidal {
    double a, b, c, d;
};

/// exp(-(x-center)^2 / (2 sigma^2)), sigma > 0.
struct Gaussian {
    double center, sigma;
};

/// 1 / (1 + exp(-slope (x - center))).
struct Sigmoidal {
    double slope, center;
};

using MembershipFunction = std::variant<Triangular, Trapezoidal, Gaussian, Sigmoidal>;

/// Attribute domain. Circular domains identify lower with upper
/// (period = upper - lower); set parameters may be stored unwrapped past the
/// upper bound so wrap-spanning sets evaluate as one piece.
struct Domain {
    enum class Kind { linear, circular };
    Kind kind = Kind::linear;
    double lower = 0.0;
    double upper = 1.0;

    double span() const { return upper - lower; }
    static Domain linear(double lo, double hi) { return {Kind::linear, lo, hi}; }
    static Domain circular(double lo, double hi) { return {Kind::circular, lo, hi}; }
};

/// Throws error(errc::invalid_shape) if the parameter invariants are violated.
void validate_shape(const MembershipFunction& mf);

/// Evaluates mf at x on the given domain. x is canonicalized into the domain
/// first (clamped for linear domains, wrapped for circular ones); on circular
/// domains the evaluation additionally tries x +/- period so wrap-spanning
/// sets are handled. Result is always in [0,1].
double eval_mf(const MembershipFunction& mf, const Domain& domain, double x);

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

struct FuzzySet {
    std::string label;
    MembershipFunction mf;
};

/// Strictly increasing cut points in domain units.
struct CutPointVector {
    std::vector<double> points;
};

enum class SetShape { triangle, trapezoid };

SetShape shape_of(const MembershipFunction& mf); // triangle/trapezoid only

/// Ordered labeled fuzzy sets over one attribute domain. Partitions built by
/// partition_from_cuts satisfy the sum-to-1 (Ruspini) constraint at every
/// domain point.
struct FuzzyPartition {
    Domain domain;
    std::vector<FuzzySet> sets;

    std::size_t size() const { return sets.size(); }
    std::vector<std::string> labels() const;
    double membership(std::size_t j, double x) const;
    std::vector<double> memberships(double x) const;
};

/// Builds a valid fuzzy partition from a global cut-point vector.
///
/// Linear domains: the first class is a boundary trapezoid (L, L, p1, p2)
/// or boundary triangle (L, L, p1); the last class is always the boundary
/// trapezoid (p_{m-1}, p_m, U, U). Interior triangles consume one new cut,
/// interior trapezoids two (adjacent classes share their transition edge,
/// c_j = a_{j+1}).
///
/// Circular domains: the first class is the wrap-spanning trapezoid
/// (p_{m-1}, p_m, p_1 + period, p_2 + period); remaining classes walk the
/// cuts in order and close the cycle.
///
/// Throws ArityMismatch when the cut count is incompatible with the shape
/// list and NotAPartition when the constructed sets fail the sum-to-1 probe.
FuzzyPartition partition_from_cuts(const Domain& domain,
                                   const std::vector<std::string>& labels,
                                   const std::vector<SetShape>& shapes,
                                   const CutPointVector& cuts);

struct PartitionReport {
    double max_deviation = 0.0; // max |sum mu - 1| over probes
    double worst_x = 0.0;
    std::size_t probes = 0;
    bool pass = false; // max_deviation <= 1e-6
};

/// Probes the domain at the given step and reports the worst sum-to-1
/// violation.
PartitionReport validate_partition(const FuzzyPartition& p, double step);

/// Proportional rescaling so the values sum to 1.
/// Throws ZeroMass when all inputs are zero.
std::vector<double> rescale_memberships(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Partition file format (text, versioned, bit-identical round trip)
// ---------------------------------------------------------------------------

void write_partition(const FuzzyPartition& p, std::ostream& os);
void write_partition_file(const FuzzyPartition& p, const std::string& path);
FuzzyPartition read_partition(std::istream& is);
FuzzyPartition read_partition_file(const std::string& path);

} // namespace colibri

#endif
