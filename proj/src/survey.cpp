#include "colibri/survey.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <system_error>

#include "colibri/error.hpp"

namespace colibri {

namespace {

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

double parse_double(const std::string& tok, const std::string& ctx) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw error(errc::parse_error, "bad number \"" + tok + "\" in " + ctx);
    return v;
}

bool parse_flag(const std::string& tok, const std::string& ctx) {
    if (tok == "1" || tok == "true" || tok == "yes") return true;
    if (tok == "0" || tok == "false" || tok == "no" || tok.empty()) return false;
    throw error(errc::parse_error, "bad flag \"" + tok + "\" in " + ctx);
}

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Linear interpolation between order statistics, the common
// quantile(h = (n-1)q) estimator.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
    double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void require_rect(const RespondentTable& t) {
    if (t.values.size() != t.respondents.size())
        throw std::invalid_argument("table rows differ from respondent count");
    for (const auto& row : t.values)
        if (row.size() != t.columns.size())
            throw std::invalid_argument("table row length differs from column count");
    if (t.columns.empty()) throw std::invalid_argument("table has no columns");
}

} // namespace

std::vector<SurveyResponse> read_survey_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw error(errc::parse_error, "empty survey file");
    auto header = split_csv(line);
    const std::vector<std::string> base = {"respondent_id", "gender", "age_band",
                                           "role",          "colorblind", "stimulus_id",
                                           "label"};
    bool with_selected = header.size() == base.size() + 1 && header.back() == "selected";
    bool bare = header.size() == base.size();
    if (!bare && !with_selected)
        throw error(errc::parse_error, "unexpected survey header \"" + line + "\"");
    for (std::size_t i = 0; i < base.size(); ++i)
        if (header[i] != base[i])
            throw error(errc::parse_error, "unexpected survey column \"" + header[i] + "\"");

    std::vector<SurveyResponse> out;
    std::map<std::string, std::size_t> index;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != header.size())
            throw error(errc::parse_error,
                        "line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
        if (f[0].empty())
            throw error(errc::parse_error, "line " + std::to_string(lineno) + ": empty respondent_id");

        auto [it, fresh] = index.try_emplace(f[0], out.size());
        if (fresh) {
            SurveyResponse r;
            r.respondent_id = f[0];
            r.gender = f[1];
            r.age_band = f[2];
            r.role = f[3];
            r.colorblind = parse_flag(f[4], "colorblind column");
            out.push_back(std::move(r));
        }
        SurveyResponse::Answer a;
        a.stimulus = parse_double(f[5], "stimulus_id column");
        a.label = f[6];
        a.selected = with_selected ? parse_flag(f[7], "selected column") : true;
        out[it->second].answers.push_back(std::move(a));
    }
    return out;
}

std::vector<SurveyResponse> read_survey_csv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error(errc::parse_error, "cannot open " + path);
    return read_survey_csv(is);
}

void write_survey_csv(const std::vector<SurveyResponse>& responses, std::ostream& os) {
    bool with_selected = false;
    for (const auto& r : responses)
        for (const auto& a : r.answers)
            if (!a.selected) with_selected = true;
    os << "respondent_id,gender,age_band,role,colorblind,stimulus_id,label";
    if (with_selected) os << ",selected";
    os << "\n";
    for (const auto& r : responses) {
        for (const auto& a : r.answers) {
            os << r.respondent_id << "," << r.gender << "," << r.age_band << "," << r.role << ","
               << (r.colorblind ? "1" : "0") << "," << fmt_double(a.stimulus) << "," << a.label;
            if (with_selected) os << "," << (a.selected ? "1" : "0");
            os << "\n";
        }
    }
}

VoteTable aggregate_votes(const std::vector<SurveyResponse>& responses,
                          const std::vector<std::string>& labels, bool exclude_colorblind) {
    std::map<std::string, std::size_t> label_index;
    for (std::size_t j = 0; j < labels.size(); ++j) label_index[labels[j]] = j;
    if (label_index.size() != labels.size())
        throw std::invalid_argument("duplicate labels in declared label set");

    std::vector<const SurveyResponse*> cohort;
    for (const auto& r : responses)
        if (!(exclude_colorblind && r.colorblind)) cohort.push_back(&r);
    if (cohort.empty()) throw error(errc::empty_cohort, "no respondents after exclusions");

    std::map<double, std::size_t> stim_index;
    for (const auto* r : cohort)
        for (const auto& a : r->answers) stim_index.try_emplace(a.stimulus);
    std::size_t next = 0;
    for (auto& [stim, idx] : stim_index) idx = next++;

    VoteTable v;
    v.labels = labels;
    v.stimuli.resize(stim_index.size());
    for (const auto& [stim, idx] : stim_index) v.stimuli[idx] = stim;
    v.counts.assign(stim_index.size(), std::vector<double>(labels.size(), 0.0));
    v.totals.assign(stim_index.size(), 0.0);

    for (const auto* r : cohort) {
        std::vector<int> per_stim(stim_index.size(), 0);
        for (const auto& a : r->answers) {
            auto lit = label_index.find(a.label);
            if (lit == label_index.end())
                throw error(errc::unknown_label, "label \"" + a.label + "\" from respondent " +
                                                     r->respondent_id +
                                                     " is not in the declared label set");
            std::size_t si = stim_index.at(a.stimulus);
            if (per_stim[si] == 0) v.totals[si] += 1.0;
            ++per_stim[si];
            if (a.selected) v.counts[si][lit->second] += 1.0;
            if (!a.selected || per_stim[si] > 1) v.single_label = false;
        }
    }
    return v;
}

std::vector<SurveyResponse> exclude_respondents(const std::vector<SurveyResponse>& responses,
                                                const std::set<std::string>& ids) {
    std::vector<SurveyResponse> out;
    for (const auto& r : responses)
        if (!ids.count(r.respondent_id)) out.push_back(r);
    return out;
}

RespondentTable category_counts_table(const std::vector<SurveyResponse>& responses,
                                      const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> label_index;
    for (std::size_t j = 0; j < labels.size(); ++j) label_index[labels[j]] = j;

    RespondentTable t;
    t.columns = labels;
    for (const auto& r : responses) {
        std::vector<double> row(labels.size(), 0.0);
        for (const auto& a : r.answers) {
            if (!a.selected) continue;
            auto it = label_index.find(a.label);
            if (it == label_index.end())
                throw error(errc::unknown_label, "label \"" + a.label + "\" from respondent " +
                                                     r.respondent_id +
                                                     " is not in the declared label set");
            row[it->second] += 1.0;
        }
        t.respondents.push_back(r.respondent_id);
        t.values.push_back(std::move(row));
    }
    return t;
}

RespondentTable numeric_answer_table(const std::vector<SurveyResponse>& responses,
                                     const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> label_index;
    for (std::size_t j = 0; j < labels.size(); ++j) label_index[labels[j]] = j;

    std::map<double, std::size_t> stim_index;
    for (const auto& r : responses)
        for (const auto& a : r.answers) stim_index.try_emplace(a.stimulus);
    std::size_t next = 0;
    for (auto& [stim, idx] : stim_index) idx = next++;

    RespondentTable t;
    t.columns.resize(stim_index.size());
    for (const auto& [stim, idx] : stim_index) t.columns[idx] = fmt_double(stim);

    for (const auto& r : responses) {
        std::vector<double> row(stim_index.size(),
                                std::numeric_limits<double>::quiet_NaN());
        for (const auto& a : r.answers) {
            if (!a.selected) continue;
            auto it = label_index.find(a.label);
            if (it == label_index.end())
                throw error(errc::unknown_label, "label \"" + a.label + "\" from respondent " +
                                                     r.respondent_id +
                                                     " is not in the declared label set");
            row[stim_index.at(a.stimulus)] = static_cast<double>(it->second);
        }
        for (std::size_t c = 0; c < row.size(); ++c)
            if (std::isnan(row[c]))
                throw error(errc::parse_error, "respondent " + r.respondent_id +
                                                   " has no answer for stimulus " + t.columns[c]);
        t.respondents.push_back(r.respondent_id);
        t.values.push_back(std::move(row));
    }
    return t;
}

std::vector<std::string> detect_outliers_iqr(const RespondentTable& table, double threshold_pct) {
    require_rect(table);
    const std::size_t n = table.respondents.size();
    if (n < 4) throw error(errc::too_few_participants, "IQR detection needs at least 4 respondents");

    std::vector<std::size_t> marks(n, 0);
    std::vector<double> col(n);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = table.values[r][c];
        std::sort(col.begin(), col.end());
        double q1 = quantile_sorted(col, 0.25);
        double q3 = quantile_sorted(col, 0.75);
        double threshold = q3 + 1.5 * (q3 - q1);
        for (std::size_t r = 0; r < n; ++r)
            if (table.values[r][c] > threshold) ++marks[r];
    }

    std::vector<std::string> flagged;
    for (std::size_t r = 0; r < n; ++r) {
        double pct = 100.0 * static_cast<double>(marks[r]) /
                     static_cast<double>(table.columns.size());
        if (pct > threshold_pct) flagged.push_back(table.respondents[r]);
    }
    return flagged;
}

std::vector<std::string> detect_outliers_percentile(const RespondentTable& table) {
    require_rect(table);
    const std::size_t n = table.respondents.size();
    if (n < 2)
        throw error(errc::too_few_participants, "percentile detection needs at least 2 respondents");

    std::vector<bool> flagged(n, false);
    std::vector<double> col(n);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = table.values[r][c];
        std::sort(col.begin(), col.end());
        double q01 = quantile_sorted(col, 0.01);
        double q99 = quantile_sorted(col, 0.99);
        for (std::size_t r = 0; r < n; ++r)
            if (table.values[r][c] > q99 || table.values[r][c] < q01) flagged[r] = true;
    }

    std::vector<std::string> out;
    for (std::size_t r = 0; r < n; ++r)
        if (flagged[r]) out.push_back(table.respondents[r]);
    return out;
}

long step_size(double range_degrees, double mean_distinct_hues) {
    if (!(range_degrees > 0.0) || !(mean_distinct_hues > 0.0))
        throw std::invalid_argument("step_size requires positive range and mean");
    long step = std::lround(range_degrees / mean_distinct_hues);
    return std::max(1L, step);
}

} // namespace colibri
