#include "colibri/votes.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "colibri/error.hpp"

namespace colibri {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& ctx) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw error(errc::parse_error, "bad number \"" + tok + "\" in " + ctx);
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

EmpiricalMembership votes_to_membership(const VoteTable& v) {
    EmpiricalMembership m;
    m.stimuli = v.stimuli;
    m.labels = v.labels;
    m.mu.resize(v.counts.size());
    for (std::size_t i = 0; i < v.counts.size(); ++i) {
        if (!(v.totals[i] > 0.0))
            throw error(errc::zero_total,
                        "stimulus " + fmt_double(v.stimuli[i]) + " has no evaluations");
        m.mu[i].resize(v.counts[i].size());
        for (std::size_t j = 0; j < v.counts[i].size(); ++j)
            m.mu[i][j] = v.counts[i][j] / v.totals[i];
    }
    return m;
}

void write_votes_csv(const VoteTable& v, std::ostream& os) {
    os << "stimulus";
    for (const auto& l : v.labels) os << "," << l;
    os << ",total\n";
    for (std::size_t i = 0; i < v.stimuli.size(); ++i) {
        os << fmt_double(v.stimuli[i]);
        for (double c : v.counts[i]) os << "," << fmt_double(c);
        os << "," << fmt_double(v.totals[i]) << "\n";
    }
}

VoteTable read_votes_csv(std::istream& is) {
    VoteTable v;
    std::string line;
    if (!std::getline(is, line)) throw error(errc::parse_error, "empty vote table");
    auto header = split_csv(line);
    if (header.size() < 3 || header.front() != "stimulus" || header.back() != "total")
        throw error(errc::parse_error, "vote table header must be stimulus,<labels...>,total");
    v.labels.assign(header.begin() + 1, header.end() - 1);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != header.size())
            throw error(errc::parse_error, "vote row has " + std::to_string(f.size()) +
                                               " fields, expected " + std::to_string(header.size()));
        v.stimuli.push_back(parse_double(f[0], "stimulus column"));
        std::vector<double> row;
        for (std::size_t j = 1; j + 1 < f.size(); ++j) row.push_back(parse_double(f[j], "votes"));
        v.counts.push_back(std::move(row));
        v.totals.push_back(parse_double(f.back(), "total"));
    }
    double sum_diff = 0.0;
    for (std::size_t i = 0; i < v.counts.size(); ++i) {
        double s = 0.0;
        for (double c : v.counts[i]) s += c;
        sum_diff += std::abs(s - v.totals[i]);
    }
    v.single_label = sum_diff == 0.0;
    return v;
}

void write_membership_csv(const EmpiricalMembership& m, std::ostream& os) {
    os << "stimulus";
    for (const auto& l : m.labels) os << "," << l;
    os << "\n";
    for (std::size_t i = 0; i < m.stimuli.size(); ++i) {
        os << fmt_double(m.stimuli[i]);
        for (double mu : m.mu[i]) os << "," << fmt_double(mu);
        os << "\n";
    }
}

EmpiricalMembership read_membership_csv(std::istream& is) {
    EmpiricalMembership m;
    std::string line;
    if (!std::getline(is, line)) throw error(errc::parse_error, "empty membership table");
    auto header = split_csv(line);
    if (header.size() < 2 || header.front() != "stimulus")
        throw error(errc::parse_error, "membership header must be stimulus,<labels...>");
    m.labels.assign(header.begin() + 1, header.end());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != header.size())
            throw error(errc::parse_error, "membership row has " + std::to_string(f.size()) +
                                               " fields, expected " + std::to_string(header.size()));
        m.stimuli.push_back(parse_double(f[0], "stimulus column"));
        std::vector<double> row;
        for (std::size_t j = 1; j < f.size(); ++j) row.push_back(parse_double(f[j], "membership"));
        m.mu.push_back(std::move(row));
    }
    return m;
}

} // namespace colibri
