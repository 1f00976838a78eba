// Acceptance suite: runs the shipped behavioral criteria end to end and
// prints one pass/fail line per criterion. Exit code = number of failures.
//
//   acceptance <path-to-cli> <work-dir> [--only N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "colibri/colorspace.hpp"
#include "colibri/error.hpp"
#include "colibri/fit.hpp"
#include "colibri/imageops.hpp"
#include "colibri/metrics.hpp"
#include "colibri/model.hpp"
#include "colibri/survey.hpp"

namespace fs = std::filesystem;
using namespace colibri;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
fs::path g_work;

void expect(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    expect(static_cast<bool>(is), "cannot read " + p.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void run_cli(const std::string& args) {
    std::string cmd = "\"" + g_cli + "\" " + args;
    int rc = std::system(cmd.c_str());
    expect(rc == 0, "command failed (" + std::to_string(rc) + "): " + cmd);
}

// ---------------------------------------------------------------------------
// shared fixtures
// ---------------------------------------------------------------------------

// The 45 hue stimuli used by the categorization surveys.
const std::vector<double> kHueStimuli = {
    1,   5,   12,  15,  20,  25,  30,  34,  39,  44,  49,  54,  59,  65,  81,
    97,  113, 129, 145, 159, 168, 177, 186, 195, 204, 205, 211, 217, 221, 231,
    241, 251, 258, 270, 282, 294, 306, 318, 319, 327, 335, 343, 344, 351, 358};

// Initial crisp hue ranges (label, start, end); red wraps 345..360 and 0..15.
struct HueRange {
    const char* label;
    double start, end;
};
const std::vector<HueRange> kHueRanges = {
    {"Red", 345, 15},    {"Orange", 16, 34},      {"Yellow", 35, 65},
    {"Green", 66, 159},  {"Cyan", 160, 205},      {"Light Blue", 206, 221},
    {"Blue", 222, 258},  {"Violet", 259, 319},    {"Magenta", 320, 344}};

double circular_distance(double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, 360.0 - d);
}

ImageBuffer solid_image(int w, int h, RGBColor c) {
    ImageBuffer img;
    img.width = w;
    img.height = h;
    img.pixels.assign(static_cast<std::size_t>(w) * h, c);
    return img;
}

// Independent quantile / detector oracles (same definitions as the unit
// suite, re-stated here so the acceptance run is self-contained).
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
            if (t.values[r][c] < oracle_quantile(col, 0.01) ||
                t.values[r][c] > oracle_quantile(col, 0.99))
                flagged = true;
        }
        if (flagged) out.push_back(t.respondents[r]);
    }
    return out;
}

double oracle_fleiss(const std::vector<std::vector<double>>& counts) {
    const double subjects = counts.size();
    const std::size_t cats = counts.front().size();
    double n = 0.0;
    for (double c : counts.front()) n += c;
    double p_bar = 0.0;
    for (const auto& row : counts) {
        double sum_sq = 0.0;
        for (double c : row) sum_sq += c * c;
        p_bar += (sum_sq - n) / (n * (n - 1.0));
    }
    p_bar /= subjects;
    double pe = 0.0;
    for (std::size_t j = 0; j < cats; ++j) {
        double total = 0.0;
        for (const auto& row : counts) total += row[j];
        double share = total / (subjects * n);
        pe += share * share;
    }
    return (p_bar - pe) / (1.0 - pe);
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

void criterion_1_partition_validity() {
    auto start = Clock::now();
    auto model = default_model();
    auto hue = validate_partition(model.hue, 0.01);
    expect(hue.pass, "hue partition deviates by " + std::to_string(hue.max_deviation));
    auto sat = validate_partition(model.saturation, 1e-4);
    expect(sat.pass, "saturation partition deviates by " + std::to_string(sat.max_deviation));
    auto inten = validate_partition(model.intensity, 1e-4);
    expect(inten.pass, "intensity partition deviates by " + std::to_string(inten.max_deviation));
    double elapsed = seconds_since(start);
    expect(elapsed < 5.0, "validation took " + std::to_string(elapsed) + " s");
}

void criterion_2_planted_recovery() {
    auto start = Clock::now();
    auto planted = default_model().hue; // 9-class circular partition, cuts at x.5
    std::vector<double> planted_cuts;
    for (double center : {15.5, 34.5, 65.5, 159.5, 205.5, 221.5, 258.5, 319.5, 344.5}) {
        planted_cuts.push_back(center - 6.0);
        planted_cuts.push_back(center + 6.0);
    }

    std::mt19937 rng(202406);
    EmpiricalMembership emp;
    emp.stimuli = kHueStimuli;
    emp.labels = planted.labels();
    for (double x : kHueStimuli) {
        auto probs = planted.memberships(x);
        std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
        std::vector<double> counts(probs.size(), 0.0);
        for (int v = 0; v < 1000; ++v) counts[pick(rng)] += 1.0;
        for (auto& c : counts) c /= 1000.0;
        emp.mu.push_back(std::move(counts));
    }

    // 1-degree grid around every cut; 2^18 candidates stays inside 10^6.
    std::vector<CutGrid> grids;
    for (double c : planted_cuts) grids.push_back(CutGrid{std::floor(c), std::ceil(c), 1.0});

    std::vector<SetShape> shapes(9, SetShape::trapezoid);
    auto res = fit_partition(Domain::circular(0, 360), planted.labels(), shapes, grids, emp);
    expect(res.grid_size <= 1000000, "grid size " + std::to_string(res.grid_size));
    for (std::size_t l = 0; l < planted_cuts.size(); ++l)
        expect(std::fabs(res.cuts.points[l] - planted_cuts[l]) <= 2.0,
               "cut " + std::to_string(l) + " off by " +
                   std::to_string(std::fabs(res.cuts.points[l] - planted_cuts[l])));
    expect(res.rmse <= 0.05, "rmse " + std::to_string(res.rmse));
    double elapsed = seconds_since(start);
    expect(elapsed < 60.0, "recovery took " + std::to_string(elapsed) + " s");
}

void criterion_3_fit_optimality() {
    std::mt19937 rng(555123);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int instance = 0; instance < 100; ++instance) {
        bool circular = instance % 3 == 2;
        Domain domain = circular ? Domain::circular(0, 100) : Domain::linear(0, 100);
        std::size_t k = 2 + instance % 3;
        std::vector<std::string> labels;
        std::vector<SetShape> shapes;
        for (std::size_t j = 0; j < k; ++j) {
            labels.push_back("L" + std::to_string(j));
            bool interior = circular ? j >= 1 : (j >= 1 && j + 1 < k);
            shapes.push_back(interior && unif(rng) < 0.4 ? SetShape::triangle
                                                         : SetShape::trapezoid);
        }
        std::size_t m = circular ? 2 * k : 2 * (k - 1);
        for (auto s : shapes)
            if (s == SetShape::triangle) --m;

        std::vector<CutGrid> grids;
        double spacing = 90.0 / static_cast<double>(m + 1);
        for (std::size_t l = 0; l < m; ++l) {
            double center = 5.0 + spacing * static_cast<double>(l + 1);
            double width = m >= 6 ? 1.0 : 1.0 + std::floor(unif(rng) * 2.0);
            grids.push_back(CutGrid{center - width, center + width, 1.0});
        }

        EmpiricalMembership emp;
        emp.labels = labels;
        for (double x = 2.0; x < 100.0; x += 7.0) {
            emp.stimuli.push_back(x);
            std::vector<double> row(k);
            for (auto& v : row) v = unif(rng);
            emp.mu.push_back(row);
        }

        auto fast = fit_partition(domain, labels, shapes, grids, emp);
        expect(fast.grid_size <= 10000, "instance too large");

        // brute force re-enumeration
        std::vector<std::vector<double>> values(m);
        for (std::size_t l = 0; l < m; ++l)
            for (double v = grids[l].lo; v <= grids[l].hi + 1e-9; v += grids[l].step)
                values[l].push_back(v);
        std::vector<std::size_t> odo(m, 0);
        std::optional<std::pair<std::vector<double>, double>> best;
        bool done = false;
        while (!done) {
            std::vector<double> cuts(m);
            bool increasing = true;
            for (std::size_t l = 0; l < m; ++l) {
                cuts[l] = values[l][odo[l]];
                if (l > 0 && !(cuts[l - 1] < cuts[l])) increasing = false;
            }
            if (increasing) {
                auto part = partition_from_cuts(domain, labels, shapes, CutPointVector{cuts});
                double r = partition_rmse(part, emp);
                if (!best || r < best->second) best = {cuts, r};
            }
            std::size_t l = m;
            while (true) {
                if (l == 0) {
                    done = true;
                    break;
                }
                --l;
                if (++odo[l] < values[l].size()) break;
                odo[l] = 0;
            }
        }
        expect(best.has_value(), "oracle found no candidate");
        expect(fast.cuts.points == best->first, "cut vectors differ on instance " +
                                                    std::to_string(instance));
        expect(fast.rmse == best->second, "rmse differs on instance " + std::to_string(instance));
    }
}

void criterion_4_colorspace() {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> uh(0.0, 360.0);
    std::uniform_real_distribution<double> us(0.01, 1.0);
    std::uniform_real_distribution<double> ui(0.05, 0.95);
    std::size_t tested = 0;
    for (int n = 0; n < 100000; ++n) {
        HSIColor x{uh(rng), us(rng), ui(rng)};
        auto res = hsi_to_rgb(x);
        if (res.out_of_gamut) continue;
        ++tested;
        auto back = rgb_to_hsi(res.rgb);
        expect(circular_distance(back.h, x.h) <= 1e-6, "hue round-trip error");
        expect(std::fabs(back.s - x.s) <= 1e-6, "saturation round-trip error");
        expect(std::fabs(back.i - x.i) <= 1e-6, "intensity round-trip error");
    }
    expect(tested >= 30000, "too few in-gamut samples: " + std::to_string(tested));

    for (double h = 0.0; h < 360.0; h += 7.3)
        for (double i : {0.0, 0.25, 0.5, 1.0}) {
            auto res = hsi_to_rgb({h, 0.0, i});
            expect(res.rgb.r == i && res.rgb.g == i && res.rgb.b == i,
                   "achromatic collapse not exact");
        }

    for (double boundary : {120.0, 240.0})
        for (double s : {0.3, 0.8}) {
            auto lo = hsi_to_rgb({boundary - 1e-12, s, 0.3});
            auto hi = hsi_to_rgb({boundary + 1e-12, s, 0.3});
            expect(std::fabs(lo.rgb.r - hi.rgb.r) <= 1e-9 &&
                       std::fabs(lo.rgb.g - hi.rgb.g) <= 1e-9 &&
                       std::fabs(lo.rgb.b - hi.rgb.b) <= 1e-9,
                   "sector discontinuity at " + std::to_string(boundary));
        }
}

void criterion_5_outlier_oracles() {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> nrows(4, 50);
    std::uniform_int_distribution<int> ncols(1, 10);
    std::uniform_real_distribution<double> value(0.0, 30.0);
    for (int iter = 0; iter < 1000; ++iter) {
        RespondentTable t;
        int rows = nrows(rng), cols = ncols(rng);
        for (int c = 0; c < cols; ++c) t.columns.push_back("c" + std::to_string(c));
        for (int r = 0; r < rows; ++r) {
            t.respondents.push_back("p" + std::to_string(r));
            std::vector<double> row(cols);
            for (auto& v : row) v = std::round(value(rng));
            t.values.push_back(std::move(row));
        }
        expect(detect_outliers_iqr(t) == oracle_iqr(t, 40.0),
               "IQR detector diverged on table " + std::to_string(iter));
        expect(detect_outliers_percentile(t) == oracle_percentile(t),
               "percentile detector diverged on table " + std::to_string(iter));
    }

    // hand-built 9-category example: one participant at 10x in 5 categories
    RespondentTable t;
    for (int c = 0; c < 9; ++c) t.columns.push_back("cat" + std::to_string(c));
    for (int r = 0; r < 12; ++r) {
        t.respondents.push_back("p" + std::to_string(r));
        t.values.emplace_back(9, 2.0);
    }
    for (int c = 0; c < 5; ++c) t.values[3][c] = 20.0;
    auto flagged = detect_outliers_iqr(t);
    expect(flagged == std::vector<std::string>{"p3"}, "deviant participant not isolated");
}

void criterion_6_fleiss() {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> subjects(1, 20);
    std::uniform_int_distribution<int> cats(2, 6);
    std::uniform_int_distribution<int> raters(2, 10);
    for (int iter = 0; iter < 500; ++iter) {
        int ns = subjects(rng), nc = cats(rng), n = raters(rng);
        RatingMatrix m;
        std::vector<bool> used(nc, false);
        for (int s = 0; s < ns; ++s) {
            std::vector<double> row(nc, 0.0);
            for (int r = 0; r < n; ++r) {
                int c = std::uniform_int_distribution<int>(0, nc - 1)(rng);
                row[c] += 1.0;
                used[c] = true;
            }
            m.counts.push_back(row);
        }
        // single-category draws hit the degenerate Pe = 1 branch, where the
        // raw formula is 0/0; that convention is checked separately
        if (std::count(used.begin(), used.end(), true) < 2) continue;
        expect(std::fabs(fleiss_kappa(m).kappa - oracle_fleiss(m.counts)) <= 1e-12,
               "kappa diverged from the formula on matrix " + std::to_string(iter));
    }

    RatingMatrix unanimous{{{6, 0, 0}, {0, 6, 0}, {0, 0, 6}}};
    expect(fleiss_kappa(unanimous).kappa == 1.0, "unanimous matrix should give kappa 1");
    expect(kappa_band(0.76) == "Substantial", "band(0.76) should be Substantial");
    expect(kappa_band(0.56) == "Moderate" && kappa_band(0.49) == "Moderate",
           "reported saturation/intensity bands should be Moderate");
}

void criterion_7_coherence_metrics() {
    expect(jensen_shannon({0.3, 0.7}, {0.3, 0.7}) == 0.0, "JSD(p,p) != 0");
    expect(jensen_shannon({1, 0}, {0, 1}) == 1.0, "disjoint JSD != 1");
    expect(jensen_shannon({0.5, 0.5, 0, 0}, {0, 0, 0.5, 0.5}) == 1.0, "disjoint JSD != 1");

    std::mt19937 rng(8080);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<double> p(6), q(6);
        for (auto& v : p) v = unif(rng);
        for (auto& v : q) v = unif(rng);
        double a = jensen_shannon(p, q);
        expect(a == jensen_shannon(q, p), "JSD asymmetry");
        expect(a >= 0.0 && a <= 1.0, "JSD out of [0,1]");
    }

    std::vector<double> v = {0.2, 0.5, 0.3};
    expect(std::fabs(cosine_similarity(v, v) - 1.0) <= 1e-12, "cosine(p,p) != 1");
    expect(std::fabs(pearson(v, v) - 1.0) <= 1e-12, "pearson(p,p) != 1");
    std::vector<double> neg = {-0.2, -0.5, -0.3};
    expect(std::fabs(pearson(v, neg) + 1.0) <= 1e-12, "pearson(p,-p) != -1");
    expect(cosine_similarity({1, 0}, {0, 1}) == 0.0, "orthogonal cosine != 0");
}

void criterion_8_boundary_color() {
    auto model = default_model();
    auto d = classify(model, {187.0, 0.8, 0.5});
    expect(!d.achromatic && !d.hue.empty(), "flag color should be chromatic");
    auto sorted = d.hue;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::size_t checked = 0;
    for (const auto& [label, mu] : sorted) {
        if (mu <= 0.0 || checked >= 2) break;
        ++checked;
        expect(label == "Cyan" || label == "Light Blue",
               "top hue label \"" + label + "\" outside {Cyan, Light Blue}");
    }
    expect(checked >= 1, "no nonzero hue memberships");
}

void criterion_9_crisp_ranges() {
    auto model = default_model();
    std::vector<double> boundaries;
    for (const auto& r : kHueRanges) boundaries.push_back(r.end + 0.5);

    auto range_label = [](double h) -> std::string {
        for (const auto& r : kHueRanges) {
            if (r.start <= r.end) {
                if (h >= r.start && h <= r.end) return r.label;
            } else if (h >= r.start || h <= r.end) {
                return r.label; // red wraps
            }
        }
        return "";
    };

    std::size_t tested = 0;
    for (int h = 0; h < 360; ++h) {
        double nearest = 360.0;
        for (double b : boundaries) nearest = std::min(nearest, circular_distance(h, b));
        if (nearest < 6.0) continue;
        ++tested;
        auto d = classify(model, {static_cast<double>(h), 1.0, 0.5});
        auto expected = range_label(h);
        expect(!expected.empty(), "hue " + std::to_string(h) + " not in any range");
        expect(d.crisp_hue == expected, "hue " + std::to_string(h) + ": crisp " + d.crisp_hue +
                                            " != range label " + expected);
    }
    expect(tested > 200, "too few testable hues");
}

void criterion_10_dominant_colors() {
    auto model = default_model();

    ImageBuffer mix;
    mix.width = 100;
    mix.height = 100;
    mix.pixels.assign(10000, {0.0, 1.0, 0.0});
    for (int i = 0; i < 6000; ++i) mix.pixels[i] = {1.0, 0.0, 0.0};
    auto res = dominant_colors(model, mix, 5, 1);
    auto proportion = [&res](const std::string& label) {
        for (const auto& e : res.entries)
            if (e.label == label) return e.proportion;
        return 0.0;
    };
    expect(std::fabs(proportion("Red") - 0.6) <= 0.02, "red proportion off");
    expect(std::fabs(proportion("Green") - 0.4) <= 0.02, "green proportion off");

    for (auto color : {RGBColor{1, 0, 0}, RGBColor{0.5, 0.5, 0.5}}) {
        auto uni = dominant_colors(model, solid_image(32, 32, color), 5, 1);
        expect(uni.entries.size() == 1, "uniform image should give one label");
        expect(std::fabs(uni.entries[0].proportion - 1.0) <= 1e-6, "uniform proportion not 1");
    }

    std::mt19937 rng(1001);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ImageBuffer noisy;
    noisy.width = 50;
    noisy.height = 40;
    for (int i = 0; i < 2000; ++i) noisy.pixels.push_back({unif(rng), unif(rng), unif(rng)});
    auto before = dominant_colors(model, noisy, 14, 1);
    auto shuffled = noisy;
    std::shuffle(shuffled.pixels.begin(), shuffled.pixels.end(), rng);
    auto after = dominant_colors(model, shuffled, 14, 1);
    expect(before.entries.size() == after.entries.size(), "entry count changed by permutation");
    for (const auto& e : before.entries) {
        double p = -1.0;
        for (const auto& o : after.entries)
            if (o.label == e.label) p = o.proportion;
        expect(std::fabs(p - e.proportion) <= 1e-9, "permutation changed " + e.label);
    }
}

void criterion_11_cbir() {
    auto model = default_model();

    // 100 two-color fixtures with unique red/green ratios; im099 is all red.
    std::vector<std::pair<std::string, ImageBuffer>> images;
    for (int i = 0; i < 100; ++i) {
        ImageBuffer img;
        img.width = 10;
        img.height = 10;
        img.pixels.assign(100, {0.0, 1.0, 0.0});
        for (int p = 0; p <= i; ++p) img.pixels[p] = {1.0, 0.0, 0.0};
        char name[16];
        std::snprintf(name, sizeof(name), "im%03d", i);
        images.emplace_back(name, std::move(img));
    }
    auto index = index_images(model, images);

    for (const auto& e : index.entries) {
        auto hits = query_descriptor(index, e.mass, 1);
        expect(hits.size() == 1 && hits[0].first == e.image_id,
               "self-query did not rank " + e.image_id + " first");
    }

    auto red_hits = query_labels(index, {"Red"}, index.entries.size());
    expect(red_hits.front().first == "im099", "all-red fixture not ranked first");
    for (std::size_t i = 1; i < red_hits.size(); ++i)
        expect(red_hits[i - 1].second >= red_hits[i].second, "ranking not monotone");

    std::ostringstream once, twice;
    write_index(index, once);
    auto reindexed = index_images(model, images);
    write_index(reindexed, twice);
    expect(once.str() == twice.str(), "re-indexing is not byte-identical");
}

void criterion_12_pipeline_determinism() {
    expect(!g_cli.empty(), "CLI path not supplied");
    fs::path fixtures = g_work / "fixtures";
    fs::create_directories(fixtures / "imgs");

    {
        // deterministic synthetic saturation survey around the default edges
        std::mt19937 rng(606060);
        auto model = default_model();
        std::vector<SurveyResponse> responses;
        for (int r = 0; r < 25; ++r) {
            SurveyResponse resp;
            resp.respondent_id = "p" + std::to_string(100 + r);
            resp.colorblind = r == 24;
            for (int s = 0; s <= 25; ++s) {
                double x = s * 0.04;
                auto probs = model.saturation.memberships(x);
                std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
                resp.answers.push_back({x, saturation_labels()[pick(rng)], true});
            }
            responses.push_back(resp);
        }
        std::ofstream os(fixtures / "survey.csv", std::ios::binary);
        write_survey_csv(responses, os);
    }
    write_bmp_file(solid_image(12, 12, {1, 0, 0}), (fixtures / "imgs" / "red.bmp").string());
    write_bmp_file(solid_image(12, 12, {0, 1, 0}), (fixtures / "imgs" / "green.bmp").string());
    {
        ImageBuffer mix;
        mix.width = 10;
        mix.height = 10;
        mix.pixels.assign(100, {0.0, 0.0, 1.0});
        for (int i = 0; i < 30; ++i) mix.pixels[i] = {1.0, 1.0, 1.0};
        write_bmp_file(mix, (fixtures / "imgs" / "mix.bmp").string());
    }

    auto run_pipeline = [&fixtures](const fs::path& out) {
        fs::create_directories(out);
        auto p = [&out](const char* name) { return (out / name).string(); };
        run_cli("export-model --out \"" + p("model") + "\" > \"" + p("export.log") + "\"");
        run_cli("ingest --csv \"" + (fixtures / "survey.csv").string() +
                "\" --labels \"Very low,Low,Medium,High\" --exclude-colorblind "
                "--outliers percentile --out \"" +
                p("ingest") + "\" > \"" + p("ingest.log") + "\"");
        run_cli("fit --membership \"" + (out / "ingest" / "membership.csv").string() +
                "\" --domain linear:0:1 --labels \"Very low,Low,Medium,High\" "
                "--shapes trap,trap,trap,trap "
                "--grid \"0.15:0.35:0.01;0.25:0.45:0.01;0.4:0.5:0.01;0.5:0.6:0.01;"
                "0.65:0.75:0.01;0.75:0.85:0.01\" --out \"" +
                p("fitted.partition") + "\" --report \"" + p("fit_report.txt") + "\" > \"" +
                p("fit.log") + "\"");
        run_cli("validate --votes \"" + (out / "ingest" / "votes.csv").string() +
                "\" --attribute saturation --out \"" + p("validate") + "\" > \"" +
                p("validate.log") + "\"");
        run_cli("classify --hex \"#00AFCA\" > \"" + p("classify.json") + "\"");
        run_cli("dominant --image \"" + (fixtures / "imgs" / "mix.bmp").string() +
                "\" --out \"" + p("dominant.json") + "\" > /dev/null");
        run_cli("index --images \"" + (fixtures / "imgs").string() + "\" --out \"" +
                p("index.colibri") + "\" > \"" + p("index.log") + "\"");
        run_cli("query --index \"" + p("index.colibri") + "\" --label Red > \"" +
                p("query.txt") + "\"");
    };

    fs::path run_a = g_work / "run_a";
    fs::path run_b = g_work / "run_b";
    fs::remove_all(run_a);
    fs::remove_all(run_b);
    run_pipeline(run_a);
    run_pipeline(run_b);

    const std::vector<std::string> artifacts = {
        "model/manifest.json",   "model/hue.partition", "model/saturation.partition",
        "model/intensity.partition", "ingest/votes.csv", "ingest/membership.csv",
        "ingest/preprocessing.txt",  "fitted.partition", "fit_report.txt",
        "validate/validation.txt",   "validate/validation.csv", "classify.json",
        "dominant.json",             "index.colibri",    "query.txt"};
    for (const auto& name : artifacts) {
        auto a = read_file(run_a / name);
        auto b = read_file(run_b / name);
        expect(!a.empty(), name + " is empty");
        expect(a == b, name + " differs between runs");
    }
}

struct Criterion {
    int number;
    const char* name;
    std::function<void()> body;
};

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    g_work = argc > 2 ? fs::path(argv[2]) : fs::path("acceptance_work");
    int only = 0;
    for (int i = 3; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--only") only = std::atoi(argv[i + 1]);
    fs::create_directories(g_work);

    const std::vector<Criterion> criteria = {
        {1, "partition validity (1e-6 sum-to-1 at fine steps, < 5 s)", criterion_1_partition_validity},
        {2, "planted-partition recovery (45 stimuli, 1000 votes, < 60 s)", criterion_2_planted_recovery},
        {3, "fit optimality vs. brute force on 100 instances", criterion_3_fit_optimality},
        {4, "HSI<->RGB round trip, achromatic collapse, sector continuity", criterion_4_colorspace},
        {5, "outlier detectors vs. quantile oracles on 1000 tables", criterion_5_outlier_oracles},
        {6, "Fleiss kappa formula agreement and bands", criterion_6_fleiss},
        {7, "coherence metric identities", criterion_7_coherence_metrics},
        {8, "boundary color H=187 within {Cyan, Light Blue}", criterion_8_boundary_color},
        {9, "crisp hue ranges honored 6 degrees from boundaries", criterion_9_crisp_ranges},
        {10, "dominant colors: 60/40, uniform, permutation invariance", criterion_10_dominant_colors},
        {11, "CBIR: self-query, label query, byte-identical re-index", criterion_11_cbir},
        {12, "byte-identical full-pipeline reruns", criterion_12_pipeline_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only && c.number != only) continue;
        auto start = Clock::now();
        try {
            c.body();
            std::printf("[PASS] %2d. %s (%.2fs)\n", c.number, c.name, seconds_since(start));
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %2d. %s: %s\n", c.number, c.name, e.what());
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures;
}
