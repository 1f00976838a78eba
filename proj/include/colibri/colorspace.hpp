#ifndef COLIBRI_COLORSPACE_HPP
#define COLIBRI_COLORSPACE_HPP

#include <cstdint>
#include <string>

namespace colibri {

/// Normalized RGB triple, each channel in [0,1]. 8-bit I/O scales by 255.
struct RGBColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

/// Hue in degrees [0,360), saturation and intensity in [0,1].
/// Achromatic colors are canonical: s == 0 forces h == 0, i == 0 forces
/// s == h == 0.
struct HSIColor {
    double h = 0.0;
    double s = 0.0;
    double i = 0.0;
};

/// Result of an HSI -> RGB conversion. High-saturation, high-intensity HSI
/// points can fall outside the RGB cube; the channels are clamped to [0,1]
/// and the event is reported rather than treated as a failure.
struct HsiToRgbResult {
    RGBColor rgb;
    bool out_of_gamut = false; // some pre-clamp channel was outside [-1e-9, 1+1e-9]
    double max_excess = 0.0;   // largest distance of a pre-clamp channel from [0,1]
};

/// Three-sector HSI -> RGB conversion. The input is canonicalized to the
/// HSIColor invariants first.
HsiToRgbResult hsi_to_rgb(const HSIColor& c);

/// Intensity-mean / arccos RGB -> HSI conversion; exact inverse of the
/// sector equations inside the gamut. Total on [0,1]^3.
HSIColor rgb_to_hsi(const RGBColor& c);

/// Enforces the HSIColor invariants (hue wrap, achromatic collapse).
HSIColor canonical_hsi(HSIColor c);

RGBColor rgb_from_8bit(int r, int g, int b);
void rgb_to_8bit(const RGBColor& c, int& r, int& g, int& b);

/// Parses "#RRGGBB" (case-insensitive, leading '#' optional).
/// Throws error(errc::parse_error) on malformed input.
RGBColor rgb_from_hex(const std::string& hex);
std::string rgb_to_hex(const RGBColor& c);

} // namespace colibri

#endif
