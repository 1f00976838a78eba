#include "colibri/imageops.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "colibri/error.hpp"

namespace colibri {

namespace {

constexpr double kAchromaticSaturation = 0.08;
constexpr const char* kIndexMagic = "colibri-index v1";

double round_sig(double v, int digits = 9) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
    return std::round(v * mag) / mag;
}

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), round_sig(v));
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& ctx) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw error(errc::parse_error, "bad number \"" + tok + "\" in " + ctx);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
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
    out.push_back(cur);
    return out;
}

void require_image(const ImageBuffer& img) {
    if (img.width < 1 || img.height < 1 || img.pixels.empty())
        throw error(errc::empty_image, "image has no pixels");
    if (img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height))
        throw std::invalid_argument("pixel count does not match dimensions");
}

struct Accumulator {
    std::vector<double> mass;
    std::vector<double> r, g, b;

    explicit Accumulator(std::size_t n) : mass(n, 0.0), r(n, 0.0), g(n, 0.0), b(n, 0.0) {}

    void add(std::size_t label, double mu, const RGBColor& px) {
        mass[label] += mu;
        r[label] += mu * px.r;
        g[label] += mu * px.g;
        b[label] += mu * px.b;
    }
};

Accumulator accumulate(const ColibriModel& model, const ImageBuffer& img, std::size_t stride,
                       std::size_t& sampled) {
    const std::size_t hue_n = model.hue.size();
    Accumulator acc(hue_n + model.intensity.size());
    sampled = 0;
    for (std::size_t i = 0; i < img.pixels.size(); i += stride) {
        const RGBColor& px = img.pixels[i];
        HSIColor hsi = rgb_to_hsi(px);
        if (hsi.s < kAchromaticSaturation) {
            auto mu = model.intensity.memberships(hsi.i);
            for (std::size_t j = 0; j < mu.size(); ++j)
                if (mu[j] > 0.0) acc.add(hue_n + j, mu[j], px);
        } else {
            auto mu = model.hue.memberships(hsi.h);
            for (std::size_t j = 0; j < mu.size(); ++j)
                if (mu[j] > 0.0) acc.add(j, mu[j], px);
        }
        ++sampled;
    }
    return acc;
}

} // namespace

std::vector<std::string> index_label_space(const ColibriModel& model) {
    std::vector<std::string> labels = model.hue.labels();
    auto intensity = model.intensity.labels();
    labels.insert(labels.end(), intensity.begin(), intensity.end());
    return labels;
}

DominantColorResult dominant_colors(const ColibriModel& model, const ImageBuffer& img,
                                    std::size_t top_k, std::size_t sample_stride) {
    require_image(img);
    if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");
    if (sample_stride < 1) throw std::invalid_argument("sample_stride must be at least 1");

    std::size_t sampled = 0;
    Accumulator acc = accumulate(model, img, sample_stride, sampled);
    auto labels = index_label_space(model);
    const std::size_t hue_n = model.hue.size();
    const auto total = static_cast<double>(sampled);

    std::vector<std::size_t> order;
    for (std::size_t l = 0; l < labels.size(); ++l)
        if (acc.mass[l] > 0.0) order.push_back(l);
    std::stable_sort(order.begin(), order.end(), [&acc](std::size_t a, std::size_t b) {
        return acc.mass[a] > acc.mass[b];
    });

    DominantColorResult out;
    double covered = 0.0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        std::size_t l = order[rank];
        if (rank < top_k) {
            DominantEntry e;
            e.label = labels[l];
            e.achromatic = l >= hue_n;
            e.proportion = acc.mass[l] / total;
            e.swatch = {acc.r[l] / acc.mass[l], acc.g[l] / acc.mass[l], acc.b[l] / acc.mass[l]};
            covered += e.proportion;
            out.entries.push_back(std::move(e));
        }
    }
    out.residual = order.size() > top_k ? std::max(0.0, 1.0 - covered) : 0.0;
    return out;
}

Indexer::Indexer(const ColibriModel& model, std::size_t dominant_top_k, std::size_t sample_stride)
    : model_(model), top_k_(dominant_top_k), stride_(sample_stride) {
    index_.labels = index_label_space(model);
}

void Indexer::add(const std::string& id, const ImageBuffer& img) {
    if (id.empty() || id.find_first_of("\t\n\r") != std::string::npos)
        throw std::invalid_argument("image id must be nonempty without tabs or newlines");
    for (const auto& e : index_.entries)
        if (e.image_id == id) throw error(errc::duplicate_id, "image id \"" + id + "\"");
    require_image(img);

    std::size_t sampled = 0;
    Accumulator acc = accumulate(model_, img, stride_, sampled);
    IndexEntry entry;
    entry.image_id = id;
    entry.mass.resize(acc.mass.size());
    for (std::size_t l = 0; l < acc.mass.size(); ++l)
        entry.mass[l] = acc.mass[l] / static_cast<double>(sampled);
    entry.dominant = dominant_colors(model_, img, top_k_, stride_);
    index_.entries.push_back(std::move(entry));
}

ImageIndex Indexer::take() { return std::move(index_); }

ImageIndex index_images(const ColibriModel& model,
                        const std::vector<std::pair<std::string, ImageBuffer>>& images,
                        std::size_t dominant_top_k, std::size_t sample_stride) {
    Indexer indexer(model, dominant_top_k, sample_stride);
    for (const auto& [id, img] : images) indexer.add(id, img);
    return indexer.take();
}

void write_index(const ImageIndex& index, std::ostream& os) {
    os << kIndexMagic << "\n";
    os << "labels\t";
    for (std::size_t l = 0; l < index.labels.size(); ++l) {
        if (l) os << ",";
        os << index.labels[l];
    }
    os << "\n";
    for (const auto& e : index.entries) {
        os << e.image_id << "\t";
        bool first = true;
        for (std::size_t l = 0; l < e.mass.size(); ++l) {
            if (e.mass[l] <= 0.0) continue;
            if (!first) os << ",";
            os << index.labels[l] << ":" << fmt_double(e.mass[l]);
            first = false;
        }
        os << "\t";
        for (std::size_t k = 0; k < e.dominant.entries.size(); ++k) {
            const auto& d = e.dominant.entries[k];
            if (k) os << ";";
            os << d.label << ":" << fmt_double(d.proportion) << ":" << rgb_to_hex(d.swatch);
        }
        os << "\n";
    }
}

void write_index_file(const ImageIndex& index, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw error(errc::parse_error, "cannot open " + path + " for writing");
    write_index(index, os);
}

ImageIndex read_index(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kIndexMagic)
        throw error(errc::parse_error, "missing \"" + std::string(kIndexMagic) + "\" header");
    if (!std::getline(is, line) || line.rfind("labels\t", 0) != 0)
        throw error(errc::parse_error, "missing labels record");

    ImageIndex index;
    index.labels = split(line.substr(7), ',');
    std::map<std::string, std::size_t> label_index;
    for (std::size_t l = 0; l < index.labels.size(); ++l) label_index[index.labels[l]] = l;

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3 || fields[0].empty())
            throw error(errc::parse_error, "bad index record \"" + line + "\"");
        IndexEntry e;
        e.image_id = fields[0];
        e.mass.assign(index.labels.size(), 0.0);
        if (!fields[1].empty()) {
            for (const auto& tok : split(fields[1], ',')) {
                auto sep = tok.rfind(':');
                if (sep == std::string::npos)
                    throw error(errc::parse_error, "bad mass token \"" + tok + "\"");
                auto it = label_index.find(tok.substr(0, sep));
                if (it == label_index.end())
                    throw error(errc::parse_error, "unknown label in \"" + tok + "\"");
                e.mass[it->second] = parse_double(tok.substr(sep + 1), "mass");
            }
        }
        if (!fields[2].empty()) {
            for (const auto& tok : split(fields[2], ';')) {
                auto parts = split(tok, ':');
                if (parts.size() != 3)
                    throw error(errc::parse_error, "bad dominant token \"" + tok + "\"");
                DominantEntry d;
                d.label = parts[0];
                if (!label_index.count(d.label))
                    throw error(errc::parse_error, "unknown label in \"" + tok + "\"");
                const auto& ints = intensity_labels();
                d.achromatic = std::find(ints.begin(), ints.end(), d.label) != ints.end();
                d.proportion = parse_double(parts[1], "dominant proportion");
                d.swatch = rgb_from_hex(parts[2]);
                e.dominant.entries.push_back(std::move(d));
            }
        }
        index.entries.push_back(std::move(e));
    }
    return index;
}

ImageIndex read_index_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error(errc::parse_error, "cannot open " + path);
    return read_index(is);
}

namespace {

std::vector<std::pair<std::string, double>> rank(const ImageIndex& index,
                                                 const std::vector<double>& scores,
                                                 std::size_t top_k) {
    std::vector<std::size_t> order(index.entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return index.entries[a].image_id < index.entries[b].image_id;
    });
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i < order.size() && i < top_k; ++i)
        out.emplace_back(index.entries[order[i]].image_id, scores[order[i]]);
    return out;
}

} // namespace

std::vector<std::pair<std::string, double>> query_labels(const ImageIndex& index,
                                                         const std::vector<std::string>& labels,
                                                         std::size_t top_k) {
    std::vector<std::size_t> cols;
    for (const auto& l : labels) {
        auto it = std::find(index.labels.begin(), index.labels.end(), l);
        if (it == index.labels.end())
            throw error(errc::unknown_label, "label \"" + l + "\" is not in the index label space");
        cols.push_back(static_cast<std::size_t>(it - index.labels.begin()));
    }
    if (cols.empty()) throw std::invalid_argument("query needs at least one label");

    std::vector<double> scores(index.entries.size(), 0.0);
    for (std::size_t i = 0; i < index.entries.size(); ++i)
        for (std::size_t c : cols) scores[i] += index.entries[i].mass[c];
    return rank(index, scores, top_k);
}

std::vector<std::pair<std::string, double>> query_descriptor(const ImageIndex& index,
                                                             const std::vector<double>& mass,
                                                             std::size_t top_k) {
    if (mass.size() != index.labels.size())
        throw error(errc::length_mismatch, "descriptor has " + std::to_string(mass.size()) +
                                               " labels, index has " +
                                               std::to_string(index.labels.size()));
    double qn = 0.0;
    for (double v : mass) qn += v * v;
    if (qn <= 0.0) throw error(errc::zero_norm, "query descriptor has zero mass");

    std::vector<double> scores(index.entries.size(), 0.0);
    for (std::size_t i = 0; i < index.entries.size(); ++i) {
        const auto& em = index.entries[i].mass;
        double dot = 0.0, en = 0.0;
        for (std::size_t l = 0; l < em.size(); ++l) {
            dot += em[l] * mass[l];
            en += em[l] * em[l];
        }
        scores[i] = en > 0.0 ? dot / (std::sqrt(en) * std::sqrt(qn)) : 0.0;
    }
    return rank(index, scores, top_k);
}

} // namespace colibri
