#ifndef COLIBRI_SURVEY_HPP
#define COLIBRI_SURVEY_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "colibri/votes.hpp"

namespace colibri {

/// One respondent's survey answers. Single-label surveys have one selected
/// answer per stimulus; the alternative hue survey has one row per
/// (stimulus, label) pair with an explicit selected flag.
struct SurveyResponse {
    struct Answer {
        double stimulus = 0.0; // domain units
        std::string label;
        bool selected = true;
    };

    std::string respondent_id;
    std::string gender;   // optional, may be empty
    std::string age_band; // optional
    std::string role;     // optional
    bool colorblind = false;
    std::vector<Answer> answers;
};

/// CSV schema (UTF-8, header row):
///   respondent_id,gender,age_band,role,colorblind,stimulus_id,label[,selected]
/// one row per answer; `selected` only in alternative-survey exports.
std::vector<SurveyResponse> read_survey_csv(std::istream& is);
std::vector<SurveyResponse> read_survey_csv_file(const std::string& path);
void write_survey_csv(const std::vector<SurveyResponse>& responses, std::ostream& os);

/// Tallies votes over included respondents. Selections count toward
/// counts[i][j]; every (respondent, stimulus) row contributes to totals[i]
/// once. Throws EmptyCohort when no respondent remains and UnknownLabel for
/// answers outside the declared label set.
VoteTable aggregate_votes(const std::vector<SurveyResponse>& responses,
                          const std::vector<std::string>& labels, bool exclude_colorblind);

std::vector<SurveyResponse> exclude_respondents(const std::vector<SurveyResponse>& responses,
                                                const std::set<std::string>& ids);

/// Numeric per-respondent table used by the outlier detectors.
struct RespondentTable {
    std::vector<std::string> respondents;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> values; // [respondent][column]
};

/// Rows = respondents, columns = labels, cell = number of stimuli the
/// respondent assigned to that label.
RespondentTable category_counts_table(const std::vector<SurveyResponse>& responses,
                                      const std::vector<std::string>& labels);

/// Rows = respondents, columns = stimuli (ascending), cell = index of the
/// chosen label. Requires complete single-label responses.
RespondentTable numeric_answer_table(const std::vector<SurveyResponse>& responses,
                                     const std::vector<std::string>& labels);

/// IQR rule: a cell is an outlier when value > Q3 + 1.5*IQR for its column;
/// a respondent is flagged when more than threshold_pct percent of their
/// columns are outliers. Quartiles use the linear-interpolation estimator.
/// Requires at least 4 respondents.
std::vector<std::string> detect_outliers_iqr(const RespondentTable& table,
                                             double threshold_pct = 40.0);

/// Percentile rule: per-column Q01/Q99 thresholds; a respondent is flagged
/// when any value falls strictly outside [Q01, Q99]. Requires at least 2
/// respondents.
std::vector<std::string> detect_outliers_percentile(const RespondentTable& table);

/// Stimulus step from a category's hue range and the mean number of distinct
/// hues reported there: round(range / mean), at least 1.
long step_size(double range_degrees, double mean_distinct_hues);

} // namespace colibri

#endif
