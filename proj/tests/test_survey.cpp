#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "colibri/error.hpp"
#include "colibri/survey.hpp"

using namespace colibri;

namespace {

SurveyResponse make_response(const std::string& id, bool colorblind,
                             std::vector<SurveyResponse::Answer> answers) {
    SurveyResponse r;
    r.respondent_id = id;
    r.colorblind = colorblind;
    r.answers = std::move(answers);
    return r;
}

// Independent quantile oracle written directly from the interpolation
// definition, kept free of the library's helper.
double oracle_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * (static_cast<double>(v.size()) - 1.0);
    auto lower = static_cast<std::size_t>(pos);
    if (lower + 1 >= v.size()) return v.back();
    return v[lower] + (pos - lower) * (v[lower + 1] - v[lower]);
}

std::vector<std::string> oracle_iqr(const RespondentTable& t, double threshold_pct) {
    std::vector<std::string> out;
    for (std::size_t r = 0; r < t.respondents.size(); ++r) {
        std::size_t marked = 0;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            std::vector<double> col;
            for (const auto& row : t.values) col.push_back(row[c]);
            double q1 = oracle_quantile(col, 0.25);
            double q3 = oracle_quantile(col, 0.75);
            if (t.values[r][c] > q3 + 1.5 * (q3 - q1)) ++marked;
        }
        if (100.0 * marked / t.columns.size() > threshold_pct) out.push_back(t.respondents[r]);
    }
    return out;
}

std::vector<std::string> oracle_percentile(const RespondentTable& t) {
    std::vector<std::string> out;
    for (std::size_t r = 0; r < t.respondents.size(); ++r) {
        bool flagged = false;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            std::vector<double> col;
            for (const auto& row : t.values) col.push_back(row[c]);
            double q01 = oracle_quantile(col, 0.01);
            double q99 = oracle_quantile(col, 0.99);
            if (t.values[r][c] < q01 || t.values[r][c] > q99) flagged = true;
        }
        if (flagged) out.push_back(t.respondents[r]);
    }
    return out;
}

} // namespace

TEST_SUITE("survey") {

TEST_CASE("vote aggregation tallies included respondents only") {
    std::vector<SurveyResponse> responses;
    for (int i = 0; i < 100; ++i) {
        std::string label = i < 50 ? "red" : "orange";
        responses.push_back(make_response("r" + std::to_string(i), false, {{1.0, label, true}}));
    }

    auto table = aggregate_votes(responses, {"red", "orange"}, false);
    REQUIRE(table.stimuli == std::vector<double>{1.0});
    CHECK(table.counts[0][0] == 50.0);
    CHECK(table.counts[0][1] == 50.0);
    CHECK(table.totals[0] == 100.0);
    CHECK(table.single_label);

    SUBCASE("colorblind exclusion removes the respondent everywhere") {
        responses.push_back(make_response("cb", true, {{1.0, "red", true}}));
        auto excluded = aggregate_votes(responses, {"red", "orange"}, true);
        CHECK(excluded.counts[0][0] == 50.0);
        CHECK(excluded.totals[0] == 100.0);
        auto included = aggregate_votes(responses, {"red", "orange"}, false);
        CHECK(included.counts[0][0] == 51.0);
        CHECK(included.totals[0] == 101.0);
    }

    SUBCASE("unknown labels are rejected") {
        responses.push_back(make_response("bad", false, {{1.0, "chartreuse", true}}));
        try {
            aggregate_votes(responses, {"red", "orange"}, false);
            CHECK(false);
        } catch (const error& e) {
            CHECK(e.code() == errc::unknown_label);
        }
    }
}

TEST_CASE("empty cohort is an error") {
    std::vector<SurveyResponse> responses = {make_response("cb", true, {{1.0, "red", true}})};
    try {
        aggregate_votes(responses, {"red"}, true);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::empty_cohort);
    }
}

TEST_CASE("vote shares become raw memberships") {
    VoteTable v;
    v.stimuli = {54.0};
    v.labels = {"yellow", "green"};
    v.counts = {{516.0, 484.0}};
    v.totals = {1000.0};
    auto m = votes_to_membership(v);
    CHECK(m.mu[0][0] == doctest::Approx(0.516).epsilon(1e-12));
    CHECK(m.mu[0][1] == doctest::Approx(0.484).epsilon(1e-12));

    v.counts = {{1000.0, 0.0}};
    auto unanimous = votes_to_membership(v);
    CHECK(unanimous.mu[0][0] == 1.0);
    CHECK(unanimous.mu[0][1] == 0.0);

    v.totals = {0.0};
    try {
        votes_to_membership(v);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::zero_total);
    }
}

TEST_CASE("single-label row sums stay 1 through the pipeline") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> stim(1, 5);
    std::uniform_int_distribution<int> lab(0, 2);
    std::vector<std::string> labels = {"a", "b", "c"};
    std::vector<SurveyResponse> responses;
    for (int i = 0; i < 40; ++i) {
        SurveyResponse r;
        r.respondent_id = "r" + std::to_string(i);
        r.colorblind = i % 7 == 0;
        for (int s = 1; s <= 5; ++s) r.answers.push_back({double(s), labels[lab(rng)], true});
        responses.push_back(r);
    }
    for (bool exclude : {false, true}) {
        auto m = votes_to_membership(aggregate_votes(responses, labels, exclude));
        for (const auto& row : m.mu) {
            double sum = 0.0;
            for (double v : row) sum += v;
            CHECK(std::fabs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("excluded respondents cannot influence the membership table") {
    std::vector<std::string> labels = {"a", "b"};
    std::vector<SurveyResponse> base;
    for (int i = 0; i < 10; ++i)
        base.push_back(make_response("r" + std::to_string(i), false,
                                     {{1.0, i % 2 ? "a" : "b", true}, {2.0, "a", true}}));
    auto before = votes_to_membership(aggregate_votes(base, labels, true));

    auto with_extra = base;
    with_extra.push_back(make_response("cb", true, {{1.0, "a", true}, {2.0, "b", true}}));
    auto after = votes_to_membership(aggregate_votes(with_extra, labels, true));
    CHECK(before.mu == after.mu);
    CHECK(before.stimuli == after.stimuli);
}

TEST_CASE("IQR detector on the constructed deviant") {
    // 12 participants, 9 categories; everyone reports 2 distinct hues except
    // one participant reporting 20 in five categories.
    RespondentTable t;
    for (int c = 0; c < 9; ++c) t.columns.push_back("cat" + std::to_string(c));
    for (int r = 0; r < 12; ++r) {
        t.respondents.push_back("p" + std::to_string(r));
        t.values.emplace_back(9, 2.0);
    }
    for (int c = 0; c < 5; ++c) t.values[3][c] = 20.0;

    auto flagged = detect_outliers_iqr(t);
    REQUIRE(flagged.size() == 1); // 5 of 9 marked = 55.6% > 40%
    CHECK(flagged[0] == "p3");
    CHECK(flagged == oracle_iqr(t, 40.0));

    SUBCASE("identical participants produce no outliers") {
        for (int c = 0; c < 5; ++c) t.values[3][c] = 2.0;
        CHECK(detect_outliers_iqr(t).empty());
    }

    SUBCASE("four marked categories is 44% and still flags; three is 33% and does not") {
        t.values[3][4] = 2.0;
        CHECK(detect_outliers_iqr(t) == std::vector<std::string>{"p3"});
        t.values[3][3] = 2.0;
        CHECK(detect_outliers_iqr(t).empty());
    }

    SUBCASE("too few participants") {
        t.respondents.resize(3);
        t.values.resize(3);
        try {
            detect_outliers_iqr(t);
            CHECK(false);
        } catch (const error& e) {
            CHECK(e.code() == errc::too_few_participants);
        }
    }
}

TEST_CASE("percentile detector hand-computed 3-respondent table") {
    RespondentTable t;
    t.columns = {"s1"};
    t.respondents = {"a", "b", "c"};
    t.values = {{1.0}, {2.0}, {10.0}};
    // sorted (1,2,10): q01 = 1.02, q99 = 9.84 by linear interpolation,
    // so both extremes fall strictly outside [q01, q99].
    auto flagged = detect_outliers_percentile(t);
    CHECK(flagged == std::vector<std::string>{"a", "c"});
    CHECK(flagged == oracle_percentile(t));
}

TEST_CASE("identical respondents are never percentile outliers") {
    RespondentTable t;
    t.columns = {"s1", "s2"};
    for (int r = 0; r < 100; ++r) {
        t.respondents.push_back("p" + std::to_string(r));
        t.values.push_back({3.0, 1.0});
    }
    CHECK(detect_outliers_percentile(t).empty());

    t.values[42][1] = 50.0; // one extreme respondent in a spread dataset
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    for (int r = 0; r < 100; ++r) t.values[r][0] = unif(rng);
    auto flagged = detect_outliers_percentile(t);
    CHECK(std::find(flagged.begin(), flagged.end(), "p42") != flagged.end());
    CHECK(flagged == oracle_percentile(t));
}

TEST_CASE("detectors agree with the quantile oracle on random tables") {
    std::mt19937 rng(31415);
    std::uniform_int_distribution<int> nrows(4, 50);
    std::uniform_int_distribution<int> ncols(1, 10);
    std::uniform_real_distribution<double> value(0.0, 30.0);
    for (int iter = 0; iter < 100; ++iter) {
        RespondentTable t;
        int rows = nrows(rng), cols = ncols(rng);
        for (int c = 0; c < cols; ++c) t.columns.push_back("c" + std::to_string(c));
        for (int r = 0; r < rows; ++r) {
            t.respondents.push_back("p" + std::to_string(r));
            std::vector<double> row(cols);
            for (auto& v : row) v = std::round(value(rng));
            t.values.push_back(std::move(row));
        }
        CHECK(detect_outliers_iqr(t) == oracle_iqr(t, 40.0));
        CHECK(detect_outliers_percentile(t) == oracle_percentile(t));
    }
}

TEST_CASE("step size") {
    CHECK(step_size(90.0, 10.0) == 9);
    CHECK(step_size(31.0, 31.0) == 1);
    CHECK(step_size(30.0, 4.3) == 7);
    CHECK(step_size(5.0, 100.0) == 1); // rounds to zero, clamped up
    CHECK_THROWS_AS(step_size(0.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(step_size(90.0, 0.0), std::invalid_argument);
}

TEST_CASE("survey csv round trip") {
    std::vector<SurveyResponse> responses;
    auto r1 = make_response("alice", false, {{1.0, "red", true}, {5.0, "orange", true}});
    r1.gender = "F";
    r1.age_band = "18-24";
    r1.role = "bachelor";
    responses.push_back(r1);
    responses.push_back(make_response("bob", true, {{1.0, "red", true}, {5.0, "red", true}}));

    std::ostringstream os;
    write_survey_csv(responses, os);
    std::istringstream is(os.str());
    auto back = read_survey_csv(is);
    REQUIRE(back.size() == 2);
    CHECK(back[0].respondent_id == "alice");
    CHECK(back[0].gender == "F");
    CHECK(back[0].answers.size() == 2);
    CHECK(back[1].colorblind);

    auto votes_a = aggregate_votes(responses, {"red", "orange"}, false);
    auto votes_b = aggregate_votes(back, {"red", "orange"}, false);
    CHECK(votes_a.counts == votes_b.counts);
    CHECK(votes_a.totals == votes_b.totals);
}

TEST_CASE("alternative-survey rows carry explicit selections") {
    std::istringstream is("respondent_id,gender,age_band,role,colorblind,stimulus_id,label,selected\n"
                          "a,,,,0,10,red,1\n"
                          "a,,,,0,10,magenta,1\n"
                          "a,,,,0,20,red,0\n"
                          "b,,,,0,10,red,1\n"
                          "b,,,,0,20,red,1\n");
    auto responses = read_survey_csv(is);
    auto table = aggregate_votes(responses, {"red", "magenta"}, false);
    CHECK_FALSE(table.single_label);
    REQUIRE(table.stimuli == std::vector<double>{10.0, 20.0});
    CHECK(table.counts[0][0] == 2.0); // both selected red at stimulus 10
    CHECK(table.counts[0][1] == 1.0); // one also called it magenta
    CHECK(table.totals[0] == 2.0);
    CHECK(table.counts[1][0] == 1.0); // only b selected red at 20
    CHECK(table.totals[1] == 2.0);    // but both evaluated it

    auto m = votes_to_membership(table);
    CHECK(m.mu[1][0] == 0.5);
}

TEST_CASE("malformed survey csv is rejected") {
    auto expect_parse_error = [](const std::string& text) {
        std::istringstream is(text);
        try {
            read_survey_csv(is);
            CHECK(false);
        } catch (const error& e) {
            CHECK(e.code() == errc::parse_error);
        }
    };
    expect_parse_error("");
    expect_parse_error("id,oops\n");
    expect_parse_error("respondent_id,gender,age_band,role,colorblind,stimulus_id,label\n"
                       "a,,,,maybe,1,red\n");
    expect_parse_error("respondent_id,gender,age_band,role,colorblind,stimulus_id,label\n"
                       "a,,,,0,xyz,red\n");
    expect_parse_error("respondent_id,gender,age_band,role,colorblind,stimulus_id,label\n"
                       "a,,,,0,1\n");
}

TEST_CASE("numeric answer table encodes label indices") {
    std::vector<SurveyResponse> responses;
    responses.push_back(make_response("a", false, {{1.0, "low", true}, {2.0, "high", true}}));
    responses.push_back(make_response("b", false, {{2.0, "low", true}, {1.0, "low", true}}));
    auto t = numeric_answer_table(responses, {"low", "high"});
    REQUIRE(t.columns.size() == 2);
    CHECK(t.values[0] == std::vector<double>{0.0, 1.0});
    CHECK(t.values[1] == std::vector<double>{0.0, 0.0});

    responses.push_back(make_response("c", false, {{1.0, "low", true}}));
    CHECK_THROWS_AS(numeric_answer_table(responses, {"low", "high"}), error);
}

TEST_CASE("category counts table counts selections per label") {
    std::vector<SurveyResponse> responses;
    responses.push_back(make_response(
        "a", false, {{1.0, "red", true}, {2.0, "red", true}, {3.0, "blue", false}}));
    auto t = category_counts_table(responses, {"red", "blue"});
    CHECK(t.values[0] == std::vector<double>{2.0, 0.0});
}

} // TEST_SUITE
