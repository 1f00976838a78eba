#ifndef COLIBRI_MODEL_HPP
#define COLIBRI_MODEL_HPP

#include <string>
#include <utility>
#include <vector>

#include "colibri/colorspace.hpp"
#include "colibri/fuzzy.hpp"

namespace colibri {

/// The nine hue, four saturation and five intensity labels, in domain order.
const std::vector<std::string>& hue_labels();
const std::vector<std::string>& saturation_labels();
const std::vector<std::string>& intensity_labels();

/// Three fitted partitions bundled as a versioned model.
struct ColibriModel {
    FuzzyPartition hue;        // circular [0,360), 9 labels
    FuzzyPartition saturation; // linear [0,1], 4 labels
    FuzzyPartition intensity;  // linear [0,1], 5 labels
    std::string version;
    std::string provenance;
    double boundary_threshold = 0.25; // runner-up hue membership that flags a boundary color

    // shared-edge half-widths the partitions were generated with; 0 when the
    // partitions came from a fit instead of a generator
    double hue_edge_half_width = 0.0;
    double saturation_edge_half_width = 0.0;
    double intensity_edge_half_width = 0.0;

    /// Checks the canonical label sets and that each partition passes a
    /// sum-to-1 sweep.
    void validate() const;
};

/// Graded memberships of a color across the three attributes. Maps are in
/// partition order; crisp labels are argmaxes with first-label tie-break.
struct FuzzyColorDescriptor {
    std::vector<std::pair<std::string, double>> hue; // empty for achromatic colors
    std::vector<std::pair<std::string, double>> saturation;
    std::vector<std::pair<std::string, double>> intensity;
    std::string crisp_hue; // empty for achromatic colors
    std::string crisp_saturation;
    std::string crisp_intensity;
    std::string second_hue; // runner-up hue label (chromatic, >= 2 labels)
    double second_hue_membership = 0.0;
    bool achromatic = false;
    bool boundary = false;
};

/// Built-in model generated from the initial crisp hue ranges with a 6 degree
/// shared-edge half-width (uniform 0.05 edges for saturation/intensity).
/// Substitute fitted partitions via the model bundle files.
ColibriModel default_model();

FuzzyColorDescriptor classify(const ColibriModel& model, const HSIColor& c);

/// "Hue = Red, Saturation = Medium, Intensity = Dark gray" with a
/// "between <A> and <B>" qualifier for boundary colors and an
/// "Achromatic, ..." form for s == 0.
std::string linguistic_description(const FuzzyColorDescriptor& d);

/// JSON rendering with fixed key order and 9-significant-digit values.
std::string descriptor_to_json(const FuzzyColorDescriptor& d, const HSIColor& input);

// Model bundle: three partition files plus manifest.json in a directory.
void save_model_bundle(const ColibriModel& model, const std::string& dir);
ColibriModel load_model_bundle(const std::string& dir); // throws CorruptModelFile

} // namespace colibri

#endif
