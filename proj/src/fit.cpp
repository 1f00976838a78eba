#include "colibri/fit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "colibri/error.hpp"
#include "fuzzy_internal.hpp"

namespace colibri {

namespace {

void check_emp_against(const std::vector<std::string>& labels, const EmpiricalMembership& emp) {
    if (emp.labels != labels)
        throw error(errc::label_mismatch, "empirical labels differ from partition labels");
    if (emp.stimuli.empty())
        throw std::invalid_argument("empirical membership needs at least one sampling point");
    if (emp.mu.size() != emp.stimuli.size())
        throw std::invalid_argument("membership matrix rows differ from stimulus count");
    for (const auto& row : emp.mu)
        if (row.size() != labels.size())
            throw std::invalid_argument("membership matrix columns differ from label count");
}

// Double-mean form shared by partition_rmse and the grid-search hot path so
// both produce bit-identical values for identical parameters.
template <class EvalFn>
double rmse_impl(const EmpiricalMembership& emp, std::size_t k, EvalFn&& eval) {
    const std::size_t n = emp.stimuli.size();
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double cls = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = eval(j, emp.stimuli[i]) - emp.mu[i][j];
            cls += d * d;
        }
        total += cls / static_cast<double>(n);
    }
    return std::sqrt(total / static_cast<double>(k));
}

struct Candidate {
    double rmse = std::numeric_limits<double>::infinity();
    std::vector<double> cuts;
    std::uint64_t evaluated = 0;

    // (rmse, lexicographic cuts) ordering; smaller is better.
    bool better_than(const Candidate& o) const {
        if (cuts.empty()) return false;
        if (o.cuts.empty()) return true;
        if (rmse != o.rmse) return rmse < o.rmse;
        return cuts < o.cuts;
    }
};

// Enumerates strictly increasing cut vectors over values[level0_begin..end) x
// values[1] x ... in lexicographic order, scoring each one.
class GridWorker {
public:
    GridWorker(const Domain& domain, const std::vector<SetShape>& shapes,
               const std::vector<std::vector<double>>& values, const EmpiricalMembership& emp)
        : domain_(domain), shapes_(shapes), values_(values), emp_(emp) {
        cuts_.resize(values.size());
        mfs_.reserve(shapes.size());
    }

    Candidate run(std::size_t level0_begin, std::size_t level0_end) {
        best_ = Candidate{};
        best_total_ = std::numeric_limits<double>::infinity();
        for (std::size_t i0 = level0_begin; i0 < level0_end; ++i0) {
            cuts_[0] = values_[0][i0];
            descend(1);
        }
        return best_;
    }

private:
    void descend(std::size_t level) {
        if (level == values_.size()) {
            score();
            return;
        }
        const auto& vals = values_[level];
        double prev = cuts_[level - 1];
        auto it = std::upper_bound(vals.begin(), vals.end(), prev);
        for (; it != vals.end(); ++it) {
            cuts_[level] = *it;
            descend(level + 1);
        }
    }

    void score() {
        mfs_.clear();
        detail::build_partition_mfs(domain_, shapes_, cuts_, mfs_);
        ++best_.evaluated;

        // Same accumulation as rmse_impl, with a bound check between classes:
        // once the partial error sum exceeds the incumbent's, the candidate's
        // final RMSE cannot be strictly smaller (sqrt is monotone), so
        // abandoning it cannot change the argmin or the tie-break.
        const std::size_t n = emp_.stimuli.size();
        const std::size_t k = mfs_.size();
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double cls = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double d = detail::eval_on(mfs_[j], domain_, emp_.stimuli[i]) - emp_.mu[i][j];
                cls += d * d;
            }
            total += cls / static_cast<double>(n);
            if (total > best_total_) return;
        }
        double r = std::sqrt(total / static_cast<double>(k));
        // Lexicographic enumeration order makes "strictly better" keep the
        // lexicographically smallest vector among RMSE ties.
        if (best_.cuts.empty() || r < best_.rmse) {
            best_.rmse = r;
            best_.cuts = cuts_;
            best_total_ = total;
        }
    }

    const Domain& domain_;
    const std::vector<SetShape>& shapes_;
    const std::vector<std::vector<double>>& values_;
    const EmpiricalMembership& emp_;
    std::vector<double> cuts_;
    std::vector<MembershipFunction> mfs_;
    Candidate best_;
    double best_total_ = std::numeric_limits<double>::infinity();
};

} // namespace

double partition_rmse(const FuzzyPartition& p, const EmpiricalMembership& emp) {
    check_emp_against(p.labels(), emp);
    return rmse_impl(emp, p.size(),
                     [&p](std::size_t j, double x) { return p.membership(j, x); });
}

FitResult fit_partition(const Domain& domain, const std::vector<std::string>& labels,
                        const std::vector<SetShape>& shapes, const std::vector<CutGrid>& grids,
                        const EmpiricalMembership& emp, const FitOptions& options) {
    check_emp_against(labels, emp);
    const std::size_t m = detail::partition_cut_count(domain, shapes);
    if (grids.size() != m)
        throw error(errc::arity_mismatch, "shape list needs " + std::to_string(m) +
                                              " cut grids, got " + std::to_string(grids.size()));

    const bool circular = domain.kind == Domain::Kind::circular;
    std::vector<std::vector<double>> values(m);
    std::uint64_t grid_size = 1;
    for (std::size_t l = 0; l < m; ++l) {
        const auto& g = grids[l];
        if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.step > 0.0) || g.lo > g.hi)
            throw std::invalid_argument("cut grid requires lo <= hi and step > 0");
        auto count = static_cast<std::uint64_t>(std::floor((g.hi - g.lo) / g.step + 1e-9)) + 1;
        values[l].reserve(count);
        for (std::uint64_t t = 0; t < count; ++t)
            values[l].push_back(g.lo + static_cast<double>(t) * g.step);
        for (double v : values[l]) {
            bool ok = circular ? (v >= domain.lower && v < domain.upper)
                               : (v >= domain.lower && v <= domain.upper);
            if (!ok) throw std::invalid_argument("cut grid leaves the domain");
        }
        if (grid_size > options.budget / count)
            throw error(errc::budget_exceeded,
                        "candidate grid exceeds budget of " + std::to_string(options.budget));
        grid_size *= count;
    }

    unsigned hw = std::thread::hardware_concurrency();
    unsigned threads = options.threads ? options.threads : (hw ? hw : 1);
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>({threads, values[0].size(), grid_size / 1024 + 1}));

    std::vector<Candidate> results;
    if (threads <= 1) {
        GridWorker worker(domain, shapes, values, emp);
        results.push_back(worker.run(0, values[0].size()));
    } else {
        results.resize(threads);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        std::size_t per = (values[0].size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    std::size_t begin = std::min<std::size_t>(t * per, values[0].size());
                    std::size_t end = std::min<std::size_t>(begin + per, values[0].size());
                    GridWorker worker(domain, shapes, values, emp);
                    results[t] = worker.run(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    Candidate best;
    std::uint64_t evaluated = 0;
    for (auto& c : results) {
        evaluated += c.evaluated;
        if (c.better_than(best)) best = std::move(c);
    }
    if (best.cuts.empty())
        throw error(errc::no_valid_candidate, "no strictly increasing cut vector in the grid");

    FitResult out;
    out.cuts.points = best.cuts;
    out.partition = partition_from_cuts(domain, labels, shapes, out.cuts);
    out.rmse = best.rmse;
    out.grid_size = grid_size;
    out.candidates_evaluated = evaluated;
    return out;
}

} // namespace colibri
