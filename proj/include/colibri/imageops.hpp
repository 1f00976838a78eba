#ifndef COLIBRI_IMAGEOPS_HPP
#define COLIBRI_IMAGEOPS_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "colibri/colorspace.hpp"
#include "colibri/model.hpp"

namespace colibri {

/// Row-major 8-bit-sourced RGB image.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<RGBColor> pixels;
};

/// Decodes PNG or 24-bit uncompressed BMP, detected by magic bytes.
/// Throws error(errc::decode_failure) with the offending path.
ImageBuffer decode_image_file(const std::string& path);
ImageBuffer decode_bmp(std::istream& is, const std::string& name);
void write_bmp_file(const ImageBuffer& img, const std::string& path);

/// One palette entry: a hue label, or an intensity label for the image's
/// achromatic mass.
struct DominantEntry {
    std::string label;
    bool achromatic = false;
    double proportion = 0.0;
    RGBColor swatch; // mass-weighted mean RGB of contributing pixels
};

struct DominantColorResult {
    std::vector<DominantEntry> entries; // sorted by proportion descending
    double residual = 0.0;              // mass beyond top_k; entries + residual sum to 1
};

/// Classifies every stride-th pixel and accumulates fuzzy label mass
/// (sigma-count). Pixels with saturation below 0.08 count toward intensity
/// labels instead of hue labels.
DominantColorResult dominant_colors(const ColibriModel& model, const ImageBuffer& img,
                                    std::size_t top_k, std::size_t sample_stride = 1);

struct IndexEntry {
    std::string image_id;
    std::vector<double> mass; // canonical label order, sums to 1
    DominantColorResult dominant;
};

/// Hue labels followed by intensity labels: the label space of dominant-color
/// mass vectors.
std::vector<std::string> index_label_space(const ColibriModel& model);

struct ImageIndex {
    std::vector<std::string> labels;
    std::vector<IndexEntry> entries;
};

/// Streaming index builder; ids must be unique (DuplicateId otherwise).
class Indexer {
public:
    explicit Indexer(const ColibriModel& model, std::size_t dominant_top_k = 5,
                     std::size_t sample_stride = 1);
    void add(const std::string& id, const ImageBuffer& img);
    ImageIndex take();

private:
    const ColibriModel& model_;
    std::size_t top_k_;
    std::size_t stride_;
    ImageIndex index_;
};

ImageIndex index_images(const ColibriModel& model,
                        const std::vector<std::pair<std::string, ImageBuffer>>& images,
                        std::size_t dominant_top_k = 5, std::size_t sample_stride = 1);

// Versioned line-delimited index format (see README); writing the same index
// twice is byte-identical.
void write_index(const ImageIndex& index, std::ostream& os);
void write_index_file(const ImageIndex& index, const std::string& path);
ImageIndex read_index(std::istream& is);
ImageIndex read_index_file(const std::string& path);

/// Ranks images by total mass on the queried labels; ties broken by image id.
/// Throws UnknownLabel for labels outside the index label space.
std::vector<std::pair<std::string, double>> query_labels(const ImageIndex& index,
                                                         const std::vector<std::string>& labels,
                                                         std::size_t top_k);

/// Ranks images by cosine similarity between mass vectors.
std::vector<std::pair<std::string, double>> query_descriptor(const ImageIndex& index,
                                                             const std::vector<double>& mass,
                                                             std::size_t top_k);

} // namespace colibri

#endif
