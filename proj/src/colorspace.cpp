#include "colibri/colorspace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "colibri/error.hpp"

namespace colibri {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGamutTol = 1e-9;

double deg2rad(double d) { return d * kPi / 180.0; }

double wrap_hue(double h) {
    double w = std::fmod(h, 360.0);
    if (w < 0.0) w += 360.0;
    // fmod can land exactly on 360 for tiny negative inputs
    if (w >= 360.0) w = 0.0;
    return w;
}

// I * (1 + S*cos(H') / cos(60 - H')) with H' in [0, 120] sector coordinates.
double sector_peak(double i, double s, double hdeg) {
    return i * (1.0 + s * std::cos(deg2rad(hdeg)) / std::cos(deg2rad(60.0 - hdeg)));
}

} // namespace

HSIColor canonical_hsi(HSIColor c) {
    c.h = wrap_hue(c.h);
    if (c.i <= 0.0) {
        c.i = 0.0;
        c.s = 0.0;
        c.h = 0.0;
    } else if (c.s <= 0.0) {
        c.s = 0.0;
        c.h = 0.0;
    }
    return c;
}

HsiToRgbResult hsi_to_rgb(const HSIColor& in) {
    HSIColor c = canonical_hsi(in);
    if (c.s == 0.0) {
        // all sector equations collapse to r = g = b = I
        HsiToRgbResult out;
        out.rgb = {c.i, c.i, c.i};
        return out;
    }
    double r, g, b;
    if (c.h <= 120.0) {
        b = c.i * (1.0 - c.s);
        r = sector_peak(c.i, c.s, c.h);
        g = 3.0 * c.i - (r + b);
    } else if (c.h <= 240.0) {
        double h = c.h - 120.0;
        r = c.i * (1.0 - c.s);
        g = sector_peak(c.i, c.s, h);
        b = 3.0 * c.i - (r + g);
    } else {
        double h = c.h - 240.0;
        g = c.i * (1.0 - c.s);
        b = sector_peak(c.i, c.s, h);
        r = 3.0 * c.i - (g + b);
    }

    HsiToRgbResult out;
    for (double v : {r, g, b}) {
        double excess = std::max(0.0 - v, v - 1.0);
        if (excess > kGamutTol) {
            out.out_of_gamut = true;
            out.max_excess = std::max(out.max_excess, excess);
        }
    }
    out.rgb.r = std::clamp(r, 0.0, 1.0);
    out.rgb.g = std::clamp(g, 0.0, 1.0);
    out.rgb.b = std::clamp(b, 0.0, 1.0);
    return out;
}

HSIColor rgb_to_hsi(const RGBColor& c) {
    double i = (c.r + c.g + c.b) / 3.0;
    HSIColor out;
    out.i = i;
    if (i <= 0.0) {
        out.i = 0.0;
        return out; // black: s = h = 0
    }
    double mn = std::min({c.r, c.g, c.b});
    double s = 1.0 - mn / i;
    if (s <= 0.0) return out; // achromatic: h = 0

    double num = 0.5 * ((c.r - c.g) + (c.r - c.b));
    double den = std::sqrt((c.r - c.g) * (c.r - c.g) + (c.r - c.b) * (c.g - c.b));
    double theta = 180.0; // r = g < b limit
    if (den > 0.0) {
        double cosv = std::clamp(num / den, -1.0, 1.0);
        theta = std::acos(cosv) * 180.0 / kPi;
    }
    out.h = (c.b > c.g) ? 360.0 - theta : theta;
    out.h = wrap_hue(out.h);
    out.s = s;
    return out;
}

RGBColor rgb_from_8bit(int r, int g, int b) {
    auto cvt = [](int v) { return std::clamp(v, 0, 255) / 255.0; };
    return {cvt(r), cvt(g), cvt(b)};
}

void rgb_to_8bit(const RGBColor& c, int& r, int& g, int& b) {
    auto cvt = [](double v) { return (int)std::lround(std::clamp(v, 0.0, 1.0) * 255.0); };
    r = cvt(c.r);
    g = cvt(c.g);
    b = cvt(c.b);
}

RGBColor rgb_from_hex(const std::string& hex) {
    std::string s = hex;
    if (!s.empty() && s[0] == '#') s = s.substr(1);
    if (s.size() != 6 ||
        !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isxdigit(ch); }))
        throw error(errc::parse_error, "expected #RRGGBB, got \"" + hex + "\"");
    int v[3];
    for (int k = 0; k < 3; ++k) v[k] = std::stoi(s.substr(2 * (size_t)k, 2), nullptr, 16);
    return rgb_from_8bit(v[0], v[1], v[2]);
}

std::string rgb_to_hex(const RGBColor& c) {
    int r, g, b;
    rgb_to_8bit(c, r, g, b);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", r, g, b);
    return buf;
}

} // namespace colibri
