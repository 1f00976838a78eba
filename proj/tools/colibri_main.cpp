#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colibri/error.hpp"
#include "colibri/fit.hpp"
#include "colibri/imageops.hpp"
#include "colibri/metrics.hpp"
#include "colibri/model.hpp"
#include "colibri/survey.hpp"

namespace fs = std::filesystem;
using namespace colibri;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// bad flag values or combinations; prints to stderr and exits 1
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt9(double v) {
    if (v != 0.0 && std::isfinite(v)) {
        double mag =
            std::pow(10.0, 8 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
        v = std::round(v * mag) / mag;
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

double parse_num(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw usage_error("expected a number for " + what + ", got \"" + tok + "\"");
    }
}

Domain parse_domain(const std::string& spec) {
    auto parts = split_list(spec, ':');
    if (parts.size() != 3 || (parts[0] != "linear" && parts[0] != "circular"))
        throw usage_error(
            "domain must be linear:<lo>:<hi> or circular:<lo>:<hi>, got \"" + spec + "\"");
    double lo = parse_num(parts[1], "domain lower bound");
    double hi = parse_num(parts[2], "domain upper bound");
    return parts[0] == "circular" ? Domain::circular(lo, hi) : Domain::linear(lo, hi);
}

std::vector<SetShape> parse_shapes(const std::string& spec) {
    std::vector<SetShape> shapes;
    for (const auto& tok : split_list(spec, ',')) {
        if (tok == "trapezoid" || tok == "trapezoidal" || tok == "trap")
            shapes.push_back(SetShape::trapezoid);
        else if (tok == "triangle" || tok == "triangular" || tok == "tri")
            shapes.push_back(SetShape::triangle);
        else
            throw usage_error("unknown shape \"" + tok + "\"");
    }
    return shapes;
}

std::vector<CutGrid> parse_grids(const std::string& spec) {
    std::vector<CutGrid> grids;
    for (const auto& tok : split_list(spec, ';')) {
        auto parts = split_list(tok, ':');
        if (parts.size() != 3)
            throw usage_error("grid entries are lo:hi:step, got \"" + tok + "\"");
        grids.push_back(CutGrid{parse_num(parts[0], "grid lo"), parse_num(parts[1], "grid hi"),
                                parse_num(parts[2], "grid step")});
    }
    return grids;
}

ColibriModel resolve_model(const std::string& model_path) {
    if (!model_path.empty()) return load_model_bundle(model_path);
    return default_model();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw error(errc::bad_config, "cannot open " + path + " for writing");
    return os;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyArgs {
    std::string model_path;
    std::string hex;
    std::vector<double> hsi;
};

int run_classify(const ClassifyArgs& args) {
    if (args.hex.empty() == args.hsi.empty())
        throw usage_error("classify needs exactly one of --hex or --hsi");
    auto model = resolve_model(args.model_path);
    HSIColor c;
    if (!args.hex.empty()) {
        c = rgb_to_hsi(rgb_from_hex(args.hex));
    } else {
        c = canonical_hsi({args.hsi[0], args.hsi[1], args.hsi[2]});
    }
    auto d = classify(model, c);
    std::cout << descriptor_to_json(d, c) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string csv;
    std::string labels;
    std::string outliers = "none"; // iqr | percentile | none
    double iqr_threshold = 40.0;
    bool exclude_colorblind = false;
    double stimulus_divisor = 1.0;
    std::string out_dir = ".";
};

int run_ingest(const IngestArgs& args) {
    auto labels = split_list(args.labels, ',');
    if (labels.empty() || args.csv.empty())
        throw usage_error("ingest needs --csv and --labels");
    auto responses = read_survey_csv_file(args.csv);
    if (args.stimulus_divisor != 1.0) {
        if (!(args.stimulus_divisor > 0.0))
            throw usage_error("--stimulus-divisor must be positive");
        for (auto& r : responses)
            for (auto& a : r.answers) a.stimulus /= args.stimulus_divisor;
    }

    std::size_t colorblind = 0;
    std::vector<SurveyResponse> cohort;
    for (const auto& r : responses) {
        if (args.exclude_colorblind && r.colorblind) {
            ++colorblind;
            continue;
        }
        cohort.push_back(r);
    }
    if (cohort.empty()) throw error(errc::empty_cohort, "no respondents after exclusions");

    std::vector<std::string> outliers;
    if (args.outliers == "iqr") {
        outliers = detect_outliers_iqr(category_counts_table(cohort, labels), args.iqr_threshold);
    } else if (args.outliers == "percentile") {
        outliers = detect_outliers_percentile(numeric_answer_table(cohort, labels));
    } else if (args.outliers != "none") {
        throw usage_error("--outliers must be iqr, percentile or none");
    }
    auto kept = exclude_respondents(cohort, {outliers.begin(), outliers.end()});

    auto votes = aggregate_votes(kept, labels, args.exclude_colorblind);
    auto membership = votes_to_membership(votes);

    fs::create_directories(args.out_dir);
    auto out = [&args](const char* name) { return (fs::path(args.out_dir) / name).string(); };
    {
        auto os = open_out(out("votes.csv"));
        write_votes_csv(votes, os);
    }
    {
        auto os = open_out(out("membership.csv"));
        write_membership_csv(membership, os);
    }
    {
        auto os = open_out(out("preprocessing.txt"));
        os << "respondents " << responses.size() << "\n";
        os << "colorblind_excluded " << colorblind << "\n";
        os << "outlier_method " << args.outliers << "\n";
        if (args.outliers == "iqr") os << "iqr_threshold_pct " << fmt9(args.iqr_threshold) << "\n";
        os << "outliers_flagged " << outliers.size() << "\n";
        for (const auto& id : outliers) os << "outlier " << id << "\n";
        os << "respondents_kept " << kept.size() << "\n";
        os << "stimuli " << votes.stimuli.size() << "\n";
    }
    std::cout << "ingested " << kept.size() << " of " << responses.size() << " respondents, "
              << votes.stimuli.size() << " stimuli -> " << args.out_dir << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
    std::string membership_csv;
    std::string votes_csv;
    std::string domain;
    std::string labels;
    std::string shapes;
    std::string grid;
    std::uint64_t budget = 100000000;
    unsigned threads = 0;
    std::string out_partition;
    std::string report;
};

int run_fit(const FitArgs& args) {
    if (args.membership_csv.empty() == args.votes_csv.empty())
        throw usage_error("fit needs exactly one of --membership or --votes");

    EmpiricalMembership emp;
    if (!args.membership_csv.empty()) {
        std::ifstream is(args.membership_csv, std::ios::binary);
        if (!is) throw error(errc::parse_error, "cannot open " + args.membership_csv);
        emp = read_membership_csv(is);
    } else {
        std::ifstream is(args.votes_csv, std::ios::binary);
        if (!is) throw error(errc::parse_error, "cannot open " + args.votes_csv);
        emp = votes_to_membership(read_votes_csv(is));
    }

    auto domain = parse_domain(args.domain);
    auto labels = split_list(args.labels, ',');
    auto shapes = parse_shapes(args.shapes);
    auto grids = parse_grids(args.grid);
    FitOptions options;
    options.budget = args.budget;
    options.threads = args.threads;

    auto res = fit_partition(domain, labels, shapes, grids, emp, options);

    if (!args.out_partition.empty()) write_partition_file(res.partition, args.out_partition);

    std::ostringstream rep;
    rep << "domain " << args.domain << "\n";
    rep << "labels " << args.labels << "\n";
    rep << "grid_size " << res.grid_size << "\n";
    rep << "candidates_evaluated " << res.candidates_evaluated << "\n";
    rep << "cuts";
    for (double p : res.cuts.points) rep << " " << fmt9(p);
    rep << "\n";
    rep << "rmse " << fmt9(res.rmse) << "\n";
    rep << "note stimuli absent from a class's survey column count as membership 0\n";
    if (!args.report.empty()) {
        auto os = open_out(args.report);
        os << rep.str();
    }
    std::cout << rep.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string model_path;
    std::string votes_csv;
    std::string attribute = "hue";
    std::string out_dir;
};

int run_validate(const ValidateArgs& args) {
    auto model = resolve_model(args.model_path);
    const FuzzyPartition* part = nullptr;
    if (args.attribute == "hue")
        part = &model.hue;
    else if (args.attribute == "saturation")
        part = &model.saturation;
    else if (args.attribute == "intensity")
        part = &model.intensity;
    else
        throw usage_error("--attribute must be hue, saturation or intensity");

    std::ifstream is(args.votes_csv, std::ios::binary);
    if (!is) throw error(errc::parse_error, "cannot open " + args.votes_csv);
    auto votes = read_votes_csv(is);
    auto emp = votes_to_membership(votes);

    // model memberships at the surveyed stimuli
    EmpiricalMembership predicted;
    predicted.stimuli = emp.stimuli;
    predicted.labels = part->labels();
    for (double x : emp.stimuli) predicted.mu.push_back(part->memberships(x));

    auto coherence = coherence_report(emp, predicted);
    double rmse = partition_rmse(*part, emp);

    std::ostringstream txt;
    txt << "attribute " << args.attribute << "\n";
    txt << "stimuli " << emp.stimuli.size() << "\n";
    txt << "rmse " << fmt9(rmse) << "\n";

    bool kappa_ok = votes.single_label;
    for (std::size_t i = 1; kappa_ok && i < votes.totals.size(); ++i)
        if (votes.totals[i] != votes.totals[0]) kappa_ok = false;
    FleissResult fleiss{};
    if (kappa_ok) {
        RatingMatrix ratings{votes.counts};
        fleiss = fleiss_kappa(ratings);
        txt << "fleiss_kappa " << fmt9(fleiss.kappa) << "\n";
        txt << "kappa_band " << kappa_band(fleiss.kappa) << "\n";
        if (fleiss.degenerate) txt << "kappa_warning degenerate agreement, reported as 1\n";
    } else {
        txt << "fleiss_kappa skipped (needs a single-label table with a constant rater count)\n";
    }
    txt << "jsd " << fmt9(coherence.jsd) << "\n";
    txt << "cosine " << fmt9(coherence.cosine) << "\n";
    txt << "pearson " << fmt9(coherence.pearson) << "\n";
    txt << "worst_stimuli";
    for (std::size_t i = 0; i < coherence.per_stimulus.size() && i < 5; ++i)
        txt << " " << fmt9(coherence.per_stimulus[i].first) << ":"
            << fmt9(coherence.per_stimulus[i].second);
    txt << "\n";

    std::cout << txt.str();
    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        {
            auto os = open_out((fs::path(args.out_dir) / "validation.txt").string());
            os << txt.str();
        }
        auto os = open_out((fs::path(args.out_dir) / "validation.csv").string());
        os << "metric,value,interpretation\n";
        os << "rmse," << fmt9(rmse) << ",\n";
        if (kappa_ok)
            os << "fleiss_kappa," << fmt9(fleiss.kappa) << "," << kappa_band(fleiss.kappa) << "\n";
        os << "jsd," << fmt9(coherence.jsd) << ",0 identical / 1 different\n";
        os << "cosine," << fmt9(coherence.cosine) << ",1 maximum similarity\n";
        os << "pearson," << fmt9(coherence.pearson) << ",1 perfect positive correlation\n";
        os << "stimulus,per_stimulus_jsd,\n";
        for (const auto& [stim, jsd] : coherence.per_stimulus)
            os << fmt9(stim) << "," << fmt9(jsd) << ",\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dominant / index / query / export-model
// ---------------------------------------------------------------------------

struct DominantArgs {
    std::string model_path;
    std::string image;
    std::size_t top_k = 5;
    std::size_t stride = 1;
    std::string out;
};

int run_dominant(const DominantArgs& args) {
    auto model = resolve_model(args.model_path);
    auto img = decode_image_file(args.image);
    auto res = dominant_colors(model, img, args.top_k, args.stride);

    std::ostringstream os;
    os << "{\n  \"image\": \"" << args.image << "\",\n  \"entries\": [\n";
    for (std::size_t i = 0; i < res.entries.size(); ++i) {
        const auto& e = res.entries[i];
        os << "    {\"label\": \"" << e.label << "\", \"achromatic\": "
           << (e.achromatic ? "true" : "false") << ", \"proportion\": " << fmt9(e.proportion)
           << ", \"swatch\": \"" << rgb_to_hex(e.swatch) << "\"}";
        os << (i + 1 < res.entries.size() ? ",\n" : "\n");
    }
    os << "  ],\n  \"residual\": " << fmt9(res.residual) << "\n}\n";

    if (!args.out.empty()) {
        auto f = open_out(args.out);
        f << os.str();
    }
    std::cout << os.str();
    return kExitOk;
}

struct IndexArgs {
    std::string model_path;
    std::string images_dir;
    std::string out = "index.colibri";
    std::size_t top_k = 5;
    std::size_t stride = 1;
};

int run_index(const IndexArgs& args) {
    auto model = resolve_model(args.model_path);

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(args.images_dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        if (ext == ".bmp" || ext == ".png") files.push_back(entry.path().filename().string());
    }
    std::sort(files.begin(), files.end());

    Indexer indexer(model, args.top_k, args.stride);
    for (const auto& name : files)
        indexer.add(name, decode_image_file((fs::path(args.images_dir) / name).string()));
    auto index = indexer.take();
    write_index_file(index, args.out);
    std::cout << "indexed " << index.entries.size() << " images -> " << args.out << "\n";
    return kExitOk;
}

struct QueryArgs {
    std::string model_path;
    std::string index_file;
    std::vector<std::string> labels;
    std::string image;
    std::size_t top_k = 10;
};

int run_query(const QueryArgs& args) {
    if (args.labels.empty() == args.image.empty())
        throw usage_error("query needs either --label items or --image");
    auto index = read_index_file(args.index_file);

    std::vector<std::pair<std::string, double>> hits;
    if (!args.labels.empty()) {
        hits = query_labels(index, args.labels, args.top_k);
    } else {
        auto model = resolve_model(args.model_path);
        Indexer probe(model);
        probe.add("query", decode_image_file(args.image));
        hits = query_descriptor(index, probe.take().entries.front().mass, args.top_k);
    }
    for (std::size_t i = 0; i < hits.size(); ++i)
        std::cout << (i + 1) << "\t" << hits[i].first << "\t" << fmt9(hits[i].second) << "\n";
    return kExitOk;
}

struct ExportArgs {
    std::string model_path;
    std::string out_dir;
};

int run_export(const ExportArgs& args) {
    auto model = resolve_model(args.model_path);
    save_model_bundle(model, args.out_dir);
    std::cout << "wrote model bundle (" << model.version << ") -> " << args.out_dir << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"COLIBRI fuzzy color model: survey ingestion, partition fitting, color "
                 "classification, dominant colors and linguistic CBIR"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; command-line flags override it");
    app.set_version_flag("--version", "colibri 1.0.0");

    ClassifyArgs classify_args;
    auto* cls = app.add_subcommand("classify", "Classify a color into graded linguistic labels");
    cls->add_option("--model", classify_args.model_path, "Model bundle directory")
        ->envname("COLIBRI_MODEL_PATH");
    cls->add_option("--hex", classify_args.hex, "Color as #RRGGBB");
    cls->add_option("--hsi", classify_args.hsi, "Color as H S I (degrees, [0,1], [0,1])")
        ->expected(3);

    IngestArgs ingest_args;
    auto* ing = app.add_subcommand("ingest", "Aggregate survey CSV into vote tables");
    ing->add_option("--csv", ingest_args.csv, "Survey CSV file")->required();
    ing->add_option("--labels", ingest_args.labels, "Comma-separated label set")->required();
    ing->add_option("--outliers", ingest_args.outliers, "Outlier method: iqr|percentile|none");
    ing->add_option("--iqr-threshold", ingest_args.iqr_threshold,
                    "Percent of flagged categories that marks a respondent");
    ing->add_flag("--exclude-colorblind", ingest_args.exclude_colorblind,
                  "Drop respondents with the colorblind flag");
    ing->add_option("--stimulus-divisor", ingest_args.stimulus_divisor,
                    "Divide stimulus ids by this to reach domain units (e.g. 255)");
    ing->add_option("--out", ingest_args.out_dir, "Output directory");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Grid-search a fuzzy partition against survey data");
    fit->add_option("--membership", fit_args.membership_csv, "Empirical membership CSV");
    fit->add_option("--votes", fit_args.votes_csv, "Vote table CSV");
    fit->add_option("--domain", fit_args.domain, "linear:<lo>:<hi> or circular:<lo>:<hi>")
        ->required();
    fit->add_option("--labels", fit_args.labels, "Comma-separated labels in domain order")
        ->required();
    fit->add_option("--shapes", fit_args.shapes, "Comma-separated trapezoid|triangle per label")
        ->required();
    fit->add_option("--grid", fit_args.grid, "Per-cut lo:hi:step, ';'-separated")->required();
    fit->add_option("--budget", fit_args.budget, "Maximum candidate-grid size");
    fit->add_option("--threads", fit_args.threads, "Worker threads (0 = auto)");
    fit->add_option("--out", fit_args.out_partition, "Partition file to write");
    fit->add_option("--report", fit_args.report, "Fit report file to write");

    ValidateArgs validate_args;
    auto* val = app.add_subcommand("validate", "Agreement and coherence report for a holdout table");
    val->add_option("--model", validate_args.model_path, "Model bundle directory")
        ->envname("COLIBRI_MODEL_PATH");
    val->add_option("--votes", validate_args.votes_csv, "Holdout vote table CSV")->required();
    val->add_option("--attribute", validate_args.attribute, "hue|saturation|intensity");
    val->add_option("--out", validate_args.out_dir, "Directory for validation.txt/.csv");

    DominantArgs dominant_args;
    auto* dom = app.add_subcommand("dominant", "Extract dominant colors from an image");
    dom->add_option("--model", dominant_args.model_path, "Model bundle directory")
        ->envname("COLIBRI_MODEL_PATH");
    dom->add_option("--image", dominant_args.image, "PNG or BMP image")->required();
    dom->add_option("--top-k", dominant_args.top_k, "Palette size");
    dom->add_option("--stride", dominant_args.stride, "Sample every n-th pixel");
    dom->add_option("--out", dominant_args.out, "Also write the palette JSON here");

    IndexArgs index_args;
    auto* idx = app.add_subcommand("index", "Index a directory of images for retrieval");
    idx->add_option("--model", index_args.model_path, "Model bundle directory")
        ->envname("COLIBRI_MODEL_PATH");
    idx->add_option("--images", index_args.images_dir, "Directory of PNG/BMP images")->required();
    idx->add_option("--out", index_args.out, "Index file to write");
    idx->add_option("--top-k", index_args.top_k, "Dominant entries kept per image");
    idx->add_option("--stride", index_args.stride, "Sample every n-th pixel");

    QueryArgs query_args;
    auto* qry = app.add_subcommand("query", "Rank indexed images by labels or an example image");
    qry->add_option("--model", query_args.model_path, "Model bundle directory")
        ->envname("COLIBRI_MODEL_PATH");
    qry->add_option("--index", query_args.index_file, "Index file")->required();
    qry->add_option("--label", query_args.labels, "Label to query (repeatable)");
    qry->add_option("--image", query_args.image, "Example image for a descriptor query");
    qry->add_option("--top-k", query_args.top_k, "Results to print");

    ExportArgs export_args;
    auto* exp = app.add_subcommand("export-model", "Write a model bundle directory");
    exp->add_option("--model", export_args.model_path,
                    "Source bundle (defaults to the built-in model)")
        ->envname("COLIBRI_MODEL_PATH");
    exp->add_option("--out", export_args.out_dir, "Destination directory")->required();

    try {
        app.parse(argc, argv);
        if (cls->parsed()) return run_classify(classify_args);
        if (ing->parsed()) return run_ingest(ingest_args);
        if (fit->parsed()) return run_fit(fit_args);
        if (val->parsed()) return run_validate(validate_args);
        if (dom->parsed()) return run_dominant(dominant_args);
        if (idx->parsed()) return run_index(index_args);
        if (qry->parsed()) return run_query(query_args);
        if (exp->parsed()) return run_export(export_args);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const usage_error& e) {
        std::cerr << "colibri: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const error& e) {
        std::cerr << "colibri: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "colibri: " << e.what() << "\n";
        return kExitData;
    }
}
