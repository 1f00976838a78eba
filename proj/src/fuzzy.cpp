#include "colibri/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "colibri/error.hpp"
#include "fuzzy_internal.hpp"

namespace colibri {

namespace {

constexpr double kRuspiniTol = 1e-6;

bool finite(double v) { return std::isfinite(v); }

void require_domain(const Domain& d) {
    if (!finite(d.lower) || !finite(d.upper) || !(d.lower < d.upper))
        throw std::invalid_argument("domain requires lower < upper");
}

} // namespace

namespace detail {

double eval_raw(const MembershipFunction& mf, double x) {
    struct Visitor {
        double x;
        double operator()(const Triangular& t) const {
            if (x < t.a || x > t.c) return 0.0;
            if (x == t.b) return 1.0;
            if (x < t.b) return (x - t.a) / (t.b - t.a);
            return (t.c - x) / (t.c - t.b);
        }
        double operator()(const Trapezoidal& t) const {
            if (x < t.a || x > t.d) return 0.0;
            if (x >= t.b && x <= t.c) return 1.0;
            if (x < t.b) return (x - t.a) / (t.b - t.a);
            return (t.d - x) / (t.d - t.c);
        }
        double operator()(const Gaussian& g) const {
            double u = (x - g.center) / g.sigma;
            return std::exp(-0.5 * u * u);
        }
        double operator()(const Sigmoidal& s) const {
            return 1.0 / (1.0 + std::exp(-s.slope * (x - s.center)));
        }
    };
    return std::visit(Visitor{x}, mf);
}

double eval_on(const MembershipFunction& mf, const Domain& domain, double x) {
    if (domain.kind == Domain::Kind::circular) {
        double period = domain.span();
        double w = std::fmod(x - domain.lower, period);
        if (w < 0.0) w += period;
        double cx = domain.lower + w;
        double best = eval_raw(mf, cx);
        best = std::max(best, eval_raw(mf, cx + period));
        best = std::max(best, eval_raw(mf, cx - period));
        return best;
    }
    return eval_raw(mf, std::clamp(x, domain.lower, domain.upper));
}

std::size_t partition_cut_count(const Domain& domain, const std::vector<SetShape>& shapes) {
    const std::size_t k = shapes.size();
    if (k < 2) throw error(errc::arity_mismatch, "a partition needs at least 2 classes");
    std::size_t need = 0;
    if (domain.kind == Domain::Kind::linear) {
        if (shapes.back() != SetShape::trapezoid)
            throw error(errc::arity_mismatch, "last class on a linear domain must be trapezoidal");
        need = shapes.front() == SetShape::triangle ? 1 : 2;
        for (std::size_t j = 1; j + 1 < k; ++j)
            need += shapes[j] == SetShape::triangle ? 1 : 2;
    } else {
        if (shapes.front() != SetShape::trapezoid)
            throw error(errc::arity_mismatch,
                        "wrap class (first class) on a circular domain must be trapezoidal");
        need = 2;
        for (std::size_t j = 1; j < k; ++j) need += shapes[j] == SetShape::triangle ? 1 : 2;
    }
    return need;
}

void build_partition_mfs(const Domain& domain, const std::vector<SetShape>& shapes,
                         const std::vector<double>& cuts, std::vector<MembershipFunction>& out) {
    const std::size_t k = shapes.size();
    const std::size_t m = cuts.size();
    const std::size_t need = partition_cut_count(domain, shapes);
    if (need != m)
        throw error(errc::arity_mismatch, "shape list needs " + std::to_string(need) +
                                              " cut points, got " + std::to_string(m));

    if (domain.kind == Domain::Kind::linear) {
        double prev_a, prev_b;
        std::size_t idx = 0;
        if (shapes.front() == SetShape::triangle) {
            out.push_back(Triangular{domain.lower, domain.lower, cuts[0]});
            prev_a = domain.lower;
            prev_b = cuts[0];
            idx = 1;
        } else {
            out.push_back(Trapezoidal{domain.lower, domain.lower, cuts[0], cuts[1]});
            prev_a = cuts[0];
            prev_b = cuts[1];
            idx = 2;
        }
        for (std::size_t j = 1; j + 1 < k; ++j) {
            if (shapes[j] == SetShape::triangle) {
                out.push_back(Triangular{prev_a, prev_b, cuts[idx]});
                prev_a = prev_b;
                prev_b = cuts[idx];
                idx += 1;
            } else {
                out.push_back(Trapezoidal{prev_a, prev_b, cuts[idx], cuts[idx + 1]});
                prev_a = cuts[idx];
                prev_b = cuts[idx + 1];
                idx += 2;
            }
        }
        out.push_back(Trapezoidal{prev_a, prev_b, domain.upper, domain.upper});
    } else {
        double period = domain.span();
        out.push_back(Trapezoidal{cuts[m - 2], cuts[m - 1], cuts[0] + period, cuts[1] + period});
        double prev_a = cuts[0];
        double prev_b = cuts[1];
        std::size_t idx = 2;
        for (std::size_t j = 1; j < k; ++j) {
            if (shapes[j] == SetShape::triangle) {
                out.push_back(Triangular{prev_a, prev_b, cuts[idx]});
                prev_a = prev_b;
                prev_b = cuts[idx];
                idx += 1;
            } else {
                out.push_back(Trapezoidal{prev_a, prev_b, cuts[idx], cuts[idx + 1]});
                prev_a = cuts[idx];
                prev_b = cuts[idx + 1];
                idx += 2;
            }
        }
    }
}

} // namespace detail

void validate_shape(const MembershipFunction& mf) {
    struct Visitor {
        void operator()(const Triangular& t) const {
            if (!(finite(t.a) && finite(t.b) && finite(t.c)) || !(t.a <= t.b && t.b <= t.c))
                throw error(errc::invalid_shape, "triangular requires a <= b <= c");
        }
        void operator()(const Trapezoidal& t) const {
            if (!(finite(t.a) && finite(t.b) && finite(t.c) && finite(t.d)) ||
                !(t.a <= t.b && t.b <= t.c && t.c <= t.d))
                throw error(errc::invalid_shape, "trapezoidal requires a <= b <= c <= d");
        }
        void operator()(const Gaussian& g) const {
            if (!(finite(g.center) && finite(g.sigma)) || !(g.sigma > 0.0))
                throw error(errc::invalid_shape, "gaussian requires sigma > 0");
        }
        void operator()(const Sigmoidal& s) const {
            if (!(finite(s.slope) && finite(s.center)))
                throw error(errc::invalid_shape, "sigmoidal requires finite parameters");
        }
    };
    std::visit(Visitor{}, mf);
}

double eval_mf(const MembershipFunction& mf, const Domain& domain, double x) {
    validate_shape(mf);
    require_domain(domain);
    if (!finite(x)) throw std::invalid_argument("eval_mf requires finite x");
    return detail::eval_on(mf, domain, x);
}

SetShape shape_of(const MembershipFunction& mf) {
    if (std::holds_alternative<Triangular>(mf)) return SetShape::triangle;
    if (std::holds_alternative<Trapezoidal>(mf)) return SetShape::trapezoid;
    throw error(errc::invalid_shape, "partition sets are triangular or trapezoidal");
}

std::vector<std::string> FuzzyPartition::labels() const {
    std::vector<std::string> out;
    out.reserve(sets.size());
    for (const auto& s : sets) out.push_back(s.label);
    return out;
}

double FuzzyPartition::membership(std::size_t j, double x) const {
    return detail::eval_on(sets[j].mf, domain, x);
}

std::vector<double> FuzzyPartition::memberships(double x) const {
    std::vector<double> out(sets.size());
    for (std::size_t j = 0; j < sets.size(); ++j) out[j] = membership(j, x);
    return out;
}

FuzzyPartition partition_from_cuts(const Domain& domain, const std::vector<std::string>& labels,
                                   const std::vector<SetShape>& shapes,
                                   const CutPointVector& cuts) {
    require_domain(domain);
    if (labels.size() != shapes.size())
        throw error(errc::arity_mismatch, "labels and shapes differ in length");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty() || !seen.insert(l).second)
            throw std::invalid_argument("labels must be nonempty and unique");
    }

    const auto& p = cuts.points;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!finite(p[i]) || (i > 0 && !(p[i - 1] < p[i])))
            throw std::invalid_argument("cut points must be finite and strictly increasing");
    }
    if (!p.empty()) {
        bool in_bounds = domain.kind == Domain::Kind::linear
                             ? (p.front() >= domain.lower && p.back() <= domain.upper)
                             : (p.front() >= domain.lower && p.back() < domain.upper);
        if (!in_bounds) throw std::invalid_argument("cut points must lie within the domain");
    }

    std::vector<MembershipFunction> mfs;
    mfs.reserve(labels.size());
    detail::build_partition_mfs(domain, shapes, p, mfs);

    FuzzyPartition part;
    part.domain = domain;
    part.sets.reserve(labels.size());
    for (std::size_t j = 0; j < labels.size(); ++j) part.sets.push_back({labels[j], mfs[j]});

    // Sanity probe: uniform sweep plus every cut point. Shared linear edges
    // make the constraint exact up to rounding, so any real violation means
    // the input did not describe a partition.
    const int kProbes = 512;
    double step = domain.span() / kProbes;
    auto check = [&](double x) {
        double sum = 0.0;
        for (std::size_t j = 0; j < part.sets.size(); ++j) sum += part.membership(j, x);
        if (std::fabs(sum - 1.0) > kRuspiniTol)
            throw error(errc::not_a_partition,
                        "sum of memberships is " + std::to_string(sum) + " at x=" + std::to_string(x));
    };
    for (int i = 0; i <= kProbes; ++i) check(domain.lower + i * step);
    for (double x : p) check(x);
    return part;
}

PartitionReport validate_partition(const FuzzyPartition& p, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    PartitionReport rep;
    rep.worst_x = p.domain.lower;
    auto n = static_cast<std::size_t>(std::floor(p.domain.span() / step));
    for (std::size_t i = 0; i <= n; ++i) {
        double x = p.domain.lower + static_cast<double>(i) * step;
        double sum = 0.0;
        for (std::size_t j = 0; j < p.sets.size(); ++j) sum += p.membership(j, x);
        double dev = std::fabs(sum - 1.0);
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.worst_x = x;
        }
        ++rep.probes;
    }
    if (p.domain.kind == Domain::Kind::linear) {
        double sum = 0.0;
        for (std::size_t j = 0; j < p.sets.size(); ++j) sum += p.membership(j, p.domain.upper);
        double dev = std::fabs(sum - 1.0);
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.worst_x = p.domain.upper;
        }
        ++rep.probes;
    }
    rep.pass = rep.max_deviation <= kRuspiniTol;
    return rep;
}

std::vector<double> rescale_memberships(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) {
        if (!finite(v) || v < 0.0)
            throw std::invalid_argument("memberships must be finite and nonnegative");
        sum += v;
    }
    if (sum <= 0.0) throw error(errc::zero_mass, "all membership values are zero");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / sum;
    return out;
}

} // namespace colibri
