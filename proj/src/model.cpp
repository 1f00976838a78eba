#include "colibri/model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "colibri/error.hpp"

namespace colibri {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kHueEdgeHalfWidth = 6.0;
constexpr double kLinearEdgeHalfWidth = 0.05;

// Initial crisp hue ranges; red additionally covers 345..360.
constexpr double kHueRangeEnds[] = {15.0, 34.0, 65.0, 159.0, 205.0, 221.0, 258.0, 319.0, 344.0};

double round_sig(double v, int digits = 9) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
    return std::round(v * mag) / mag;
}

std::vector<double> edge_cuts(const std::vector<double>& centers, double half_width) {
    std::vector<double> cuts;
    for (double c : centers) {
        cuts.push_back(c - half_width);
        cuts.push_back(c + half_width);
    }
    return cuts;
}

std::size_t argmax_first(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < v.size(); ++j)
        if (v[j] > v[best]) best = j;
    return best;
}

void check_labels(const FuzzyPartition& p, const std::vector<std::string>& expected,
                  const char* attribute) {
    if (p.labels() != expected)
        throw error(errc::corrupt_model_file,
                    std::string(attribute) + " partition labels are not the canonical set");
}

ordered_json membership_object(const std::vector<std::pair<std::string, double>>& m) {
    ordered_json obj = ordered_json::object();
    for (const auto& [label, degree] : m) obj[label] = round_sig(degree);
    return obj;
}

} // namespace

const std::vector<std::string>& hue_labels() {
    static const std::vector<std::string> labels = {"Red",        "Orange", "Yellow",
                                                    "Green",      "Cyan",   "Light Blue",
                                                    "Blue",       "Violet", "Magenta"};
    return labels;
}

const std::vector<std::string>& saturation_labels() {
    static const std::vector<std::string> labels = {"Very low", "Low", "Medium", "High"};
    return labels;
}

const std::vector<std::string>& intensity_labels() {
    static const std::vector<std::string> labels = {"Black", "Dark gray", "Gray", "Light gray",
                                                    "White"};
    return labels;
}

void ColibriModel::validate() const {
    check_labels(hue, hue_labels(), "hue");
    check_labels(saturation, saturation_labels(), "saturation");
    check_labels(intensity, intensity_labels(), "intensity");
    if (hue.domain.kind != Domain::Kind::circular)
        throw error(errc::corrupt_model_file, "hue domain must be circular");
    for (const auto* p : {&hue, &saturation, &intensity}) {
        auto rep = validate_partition(*p, p->domain.span() / 4096.0);
        if (!rep.pass)
            throw error(errc::corrupt_model_file,
                        "partition violates the sum-to-1 constraint (max deviation " +
                            std::to_string(rep.max_deviation) + ")");
    }
    if (!(boundary_threshold > 0.0 && boundary_threshold <= 0.5))
        throw error(errc::corrupt_model_file, "boundary threshold must be in (0, 0.5]");
}

ColibriModel default_model() {
    ColibriModel m;

    // Adjacent crisp ranges meet at integer boundaries (..15 | 16..), so each
    // transition edge is centered on the half step after the range end. The
    // magenta/red edge (344 | 345) closes the cycle.
    std::vector<double> centers;
    for (double end : kHueRangeEnds) centers.push_back(end + 0.5);

    CutPointVector hue_cuts{edge_cuts(centers, kHueEdgeHalfWidth)};
    std::vector<SetShape> hue_shapes(hue_labels().size(), SetShape::trapezoid);
    m.hue = partition_from_cuts(Domain::circular(0.0, 360.0), hue_labels(), hue_shapes, hue_cuts);

    CutPointVector sat_cuts{edge_cuts({0.25, 0.5, 0.75}, kLinearEdgeHalfWidth)};
    std::vector<SetShape> sat_shapes(saturation_labels().size(), SetShape::trapezoid);
    m.saturation =
        partition_from_cuts(Domain::linear(0.0, 1.0), saturation_labels(), sat_shapes, sat_cuts);

    CutPointVector int_cuts{edge_cuts({0.2, 0.4, 0.6, 0.8}, kLinearEdgeHalfWidth)};
    std::vector<SetShape> int_shapes(intensity_labels().size(), SetShape::trapezoid);
    m.intensity =
        partition_from_cuts(Domain::linear(0.0, 1.0), intensity_labels(), int_shapes, int_cuts);

    m.version = "colibri-default-1";
    m.provenance = "generated from the initial crisp hue ranges, 6 deg hue edges, 0.05 linear edges";
    m.hue_edge_half_width = kHueEdgeHalfWidth;
    m.saturation_edge_half_width = kLinearEdgeHalfWidth;
    m.intensity_edge_half_width = kLinearEdgeHalfWidth;
    return m;
}

FuzzyColorDescriptor classify(const ColibriModel& model, const HSIColor& color) {
    HSIColor c = canonical_hsi(color);
    FuzzyColorDescriptor d;

    auto fill = [](const FuzzyPartition& p, double x,
                   std::vector<std::pair<std::string, double>>& out) {
        auto mu = p.memberships(x);
        out.reserve(mu.size());
        for (std::size_t j = 0; j < mu.size(); ++j) out.emplace_back(p.sets[j].label, mu[j]);
        return mu;
    };

    auto sat_mu = fill(model.saturation, c.s, d.saturation);
    d.crisp_saturation = model.saturation.sets[argmax_first(sat_mu)].label;
    auto int_mu = fill(model.intensity, c.i, d.intensity);
    d.crisp_intensity = model.intensity.sets[argmax_first(int_mu)].label;

    if (c.s == 0.0) {
        d.achromatic = true;
        return d;
    }

    auto hue_mu = fill(model.hue, c.h, d.hue);
    std::size_t top = argmax_first(hue_mu);
    d.crisp_hue = model.hue.sets[top].label;
    double second = -1.0;
    std::size_t second_idx = 0;
    for (std::size_t j = 0; j < hue_mu.size(); ++j) {
        if (j == top) continue;
        if (hue_mu[j] > second) {
            second = hue_mu[j];
            second_idx = j;
        }
    }
    if (second >= 0.0) {
        d.second_hue = model.hue.sets[second_idx].label;
        d.second_hue_membership = second;
        d.boundary = hue_mu[top] >= model.boundary_threshold && second >= model.boundary_threshold;
    }
    return d;
}

std::string linguistic_description(const FuzzyColorDescriptor& d) {
    if (d.achromatic) return "Achromatic, Intensity = " + d.crisp_intensity;
    std::string hue = d.crisp_hue;
    if (d.boundary) hue += " (between " + d.crisp_hue + " and " + d.second_hue + ")";
    return "Hue = " + hue + ", Saturation = " + d.crisp_saturation +
           ", Intensity = " + d.crisp_intensity;
}

std::string descriptor_to_json(const FuzzyColorDescriptor& d, const HSIColor& input) {
    ordered_json j;
    j["input"] = {{"h", round_sig(input.h)}, {"s", round_sig(input.s)}, {"i", round_sig(input.i)}};
    j["achromatic"] = d.achromatic;
    j["hue"] = membership_object(d.hue);
    j["saturation"] = membership_object(d.saturation);
    j["intensity"] = membership_object(d.intensity);
    j["crisp"] = ordered_json::object();
    if (d.achromatic)
        j["crisp"]["hue"] = nullptr;
    else
        j["crisp"]["hue"] = d.crisp_hue;
    j["crisp"]["saturation"] = d.crisp_saturation;
    j["crisp"]["intensity"] = d.crisp_intensity;
    j["boundary"] = d.boundary;
    j["description"] = linguistic_description(d);
    return j.dump(2);
}

void save_model_bundle(const ColibriModel& model, const std::string& dir) {
    model.validate();
    std::filesystem::create_directories(dir);
    auto path = [&dir](const char* name) {
        return (std::filesystem::path(dir) / name).string();
    };
    write_partition_file(model.hue, path("hue.partition"));
    write_partition_file(model.saturation, path("saturation.partition"));
    write_partition_file(model.intensity, path("intensity.partition"));

    ordered_json manifest;
    manifest["format"] = "colibri-model";
    manifest["format_version"] = 1;
    manifest["version"] = model.version;
    manifest["provenance"] = model.provenance;
    manifest["boundary_threshold"] = model.boundary_threshold;
    if (model.hue_edge_half_width > 0.0 || model.saturation_edge_half_width > 0.0 ||
        model.intensity_edge_half_width > 0.0) {
        manifest["edge_half_widths"] = {{"hue", model.hue_edge_half_width},
                                        {"saturation", model.saturation_edge_half_width},
                                        {"intensity", model.intensity_edge_half_width}};
    }
    manifest["partitions"] = {{"hue", "hue.partition"},
                              {"saturation", "saturation.partition"},
                              {"intensity", "intensity.partition"}};
    std::ofstream os(path("manifest.json"), std::ios::binary);
    if (!os) throw error(errc::corrupt_model_file, "cannot write " + path("manifest.json"));
    os << manifest.dump(2) << "\n";
}

ColibriModel load_model_bundle(const std::string& dir) {
    auto path = [&dir](const std::string& name) {
        return (std::filesystem::path(dir) / name).string();
    };
    std::ifstream is(path("manifest.json"), std::ios::binary);
    if (!is) throw error(errc::corrupt_model_file, "cannot open " + path("manifest.json"));
    ordered_json manifest;
    try {
        is >> manifest;
    } catch (const std::exception& e) {
        throw error(errc::corrupt_model_file, "manifest.json: " + std::string(e.what()));
    }
    try {
        if (manifest.at("format").get<std::string>() != "colibri-model" ||
            manifest.at("format_version").get<int>() != 1)
            throw error(errc::corrupt_model_file, "unsupported manifest format");
        ColibriModel m;
        m.version = manifest.at("version").get<std::string>();
        m.provenance = manifest.value("provenance", std::string());
        m.boundary_threshold = manifest.value("boundary_threshold", 0.25);
        if (manifest.contains("edge_half_widths")) {
            const auto& hw = manifest["edge_half_widths"];
            m.hue_edge_half_width = hw.value("hue", 0.0);
            m.saturation_edge_half_width = hw.value("saturation", 0.0);
            m.intensity_edge_half_width = hw.value("intensity", 0.0);
        }
        const auto& parts = manifest.at("partitions");
        m.hue = read_partition_file(path(parts.at("hue").get<std::string>()));
        m.saturation = read_partition_file(path(parts.at("saturation").get<std::string>()));
        m.intensity = read_partition_file(path(parts.at("intensity").get<std::string>()));
        m.validate();
        return m;
    } catch (const error&) {
        throw;
    } catch (const std::exception& e) {
        throw error(errc::corrupt_model_file, "manifest.json: " + std::string(e.what()));
    }
}

} // namespace colibri
