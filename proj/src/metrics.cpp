#include "colibri/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "colibri/error.hpp"

namespace colibri {

namespace {

void require_same_length(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw error(errc::length_mismatch, "vectors of length " + std::to_string(p.size()) +
                                               " and " + std::to_string(q.size()));
}

std::vector<double> as_distribution(const std::vector<double>& p) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::invalid_argument("distributions must be nonnegative");
        sum += v;
    }
    if (sum <= 0.0) throw error(errc::zero_mass, "distribution has zero mass");
    if (std::fabs(sum - 1.0) <= 1e-9) return p;
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] / sum;
    return out;
}

} // namespace

void RatingMatrix::validate() const {
    if (counts.empty()) throw std::invalid_argument("rating matrix has no subjects");
    const std::size_t cols = counts.front().size();
    if (cols == 0) throw std::invalid_argument("rating matrix has no categories");
    double n = 0.0;
    for (const auto& row : counts) {
        if (row.size() != cols) throw std::invalid_argument("ragged rating matrix");
        double sum = 0.0;
        for (double c : row) {
            if (!(c >= 0.0)) throw std::invalid_argument("negative rating count");
            sum += c;
        }
        if (n == 0.0) n = sum;
        if (sum != n) throw std::invalid_argument("rows must have a constant rater count");
    }
}

double RatingMatrix::raters_per_subject() const {
    double n = 0.0;
    for (double c : counts.front()) n += c;
    return n;
}

FleissResult fleiss_kappa(const RatingMatrix& m) {
    m.validate();
    const double n = m.raters_per_subject();
    if (!(n >= 2.0)) throw std::invalid_argument("fleiss_kappa needs at least 2 raters per subject");
    const auto subjects = static_cast<double>(m.counts.size());
    const std::size_t cats = m.counts.front().size();

    double p_bar = 0.0;
    std::vector<double> col(cats, 0.0);
    for (const auto& row : m.counts) {
        double agree = 0.0;
        for (std::size_t j = 0; j < cats; ++j) {
            agree += row[j] * row[j];
            col[j] += row[j];
        }
        p_bar += (agree - n) / (n * (n - 1.0));
    }
    p_bar /= subjects;

    double pe_bar = 0.0;
    for (std::size_t j = 0; j < cats; ++j) {
        double share = col[j] / (subjects * n);
        pe_bar += share * share;
    }

    FleissResult out;
    if (pe_bar >= 1.0) {
        // Every rater of every subject used one category: chance agreement is
        // total and the ratio is 0/0. Report full agreement.
        out.kappa = 1.0;
        out.degenerate = true;
        return out;
    }
    out.kappa = (p_bar - pe_bar) / (1.0 - pe_bar);
    return out;
}

std::string kappa_band(double kappa) {
    if (kappa < 0.0) return "Poor";
    if (kappa <= 0.20) return "Slight";
    if (kappa <= 0.40) return "Fair";
    if (kappa <= 0.60) return "Moderate";
    if (kappa <= 0.80) return "Substantial";
    return "Almost perfect";
}

double jensen_shannon(const std::vector<double>& p, const std::vector<double>& q) {
    require_same_length(p, q);
    if (p.empty()) throw std::invalid_argument("empty distributions");
    auto pd = as_distribution(p);
    auto qd = as_distribution(q);

    double acc = 0.0;
    for (std::size_t i = 0; i < pd.size(); ++i) {
        double m = 0.5 * (pd[i] + qd[i]);
        double tp = pd[i] > 0.0 ? 0.5 * pd[i] * std::log2(pd[i] / m) : 0.0;
        double tq = qd[i] > 0.0 ? 0.5 * qd[i] * std::log2(qd[i] / m) : 0.0;
        acc += tp + tq; // commutative per-index term keeps JSD(p,q) == JSD(q,p) exact
    }
    return std::clamp(acc, 0.0, 1.0);
}

double cosine_similarity(const std::vector<double>& p, const std::vector<double>& q) {
    require_same_length(p, q);
    double dot = 0.0, np = 0.0, nq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        dot += p[i] * q[i];
        np += p[i] * p[i];
        nq += q[i] * q[i];
    }
    if (np <= 0.0 || nq <= 0.0) throw error(errc::zero_norm, "cosine of a zero vector");
    return dot / (std::sqrt(np) * std::sqrt(nq));
}

double pearson(const std::vector<double>& p, const std::vector<double>& q) {
    require_same_length(p, q);
    const auto n = static_cast<double>(p.size());
    if (p.size() < 2) throw std::invalid_argument("pearson needs at least 2 samples");
    double mp = 0.0, mq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mp += p[i];
        mq += q[i];
    }
    mp /= n;
    mq /= n;
    double cov = 0.0, vp = 0.0, vq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cov += (p[i] - mp) * (q[i] - mq);
        vp += (p[i] - mp) * (p[i] - mp);
        vq += (q[i] - mq) * (q[i] - mq);
    }
    if (vp <= 0.0 || vq <= 0.0) throw error(errc::zero_variance, "pearson of a constant vector");
    return cov / (std::sqrt(vp) * std::sqrt(vq));
}

CoherenceReport coherence_report(const EmpiricalMembership& a, const EmpiricalMembership& b) {
    if (a.labels != b.labels)
        throw error(errc::label_mismatch, "membership tables have different labels");
    if (a.stimuli != b.stimuli)
        throw error(errc::length_mismatch, "membership tables cover different stimuli");

    std::vector<double> va, vb;
    for (std::size_t i = 0; i < a.stimuli.size(); ++i) {
        va.insert(va.end(), a.mu[i].begin(), a.mu[i].end());
        vb.insert(vb.end(), b.mu[i].begin(), b.mu[i].end());
    }

    CoherenceReport rep;
    rep.jsd = jensen_shannon(va, vb);
    rep.cosine = cosine_similarity(va, vb);
    rep.pearson = pearson(va, vb);
    for (std::size_t i = 0; i < a.stimuli.size(); ++i)
        rep.per_stimulus.emplace_back(a.stimuli[i], jensen_shannon(a.mu[i], b.mu[i]));
    std::stable_sort(rep.per_stimulus.begin(), rep.per_stimulus.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    return rep;
}

} // namespace colibri
