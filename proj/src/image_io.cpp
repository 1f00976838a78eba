#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <png.h>

#include "colibri/error.hpp"
#include "colibri/imageops.hpp"

namespace colibri {

namespace {

std::uint32_t rd_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::int32_t rd_i32(const unsigned char* p) { return static_cast<std::int32_t>(rd_u32(p)); }

std::uint16_t rd_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void wr_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
    out.push_back((v >> 16) & 0xFF);
    out.push_back((v >> 24) & 0xFF);
}

void wr_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
}

ImageBuffer decode_png_file(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw error(errc::decode_failure, path + ": " + image.message);
    image.format = PNG_FORMAT_RGB;
    std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw error(errc::decode_failure, path + ": " + msg);
    }

    ImageBuffer img;
    img.width = static_cast<int>(image.width);
    img.height = static_cast<int>(image.height);
    img.pixels.reserve(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i + 2 < buffer.size(); i += 3)
        img.pixels.push_back(rgb_from_8bit(buffer[i], buffer[i + 1], buffer[i + 2]));
    return img;
}

} // namespace

ImageBuffer decode_bmp(std::istream& is, const std::string& name) {
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
    if (data.size() < 54 || data[0] != 'B' || data[1] != 'M')
        throw error(errc::decode_failure, name + ": not a BMP file");

    std::uint32_t pixel_offset = rd_u32(&data[10]);
    std::uint32_t header_size = rd_u32(&data[14]);
    if (header_size < 40) throw error(errc::decode_failure, name + ": unsupported BMP header");
    std::int32_t width = rd_i32(&data[18]);
    std::int32_t height = rd_i32(&data[22]);
    std::uint16_t bpp = rd_u16(&data[28]);
    std::uint32_t compression = rd_u32(&data[30]);
    if (bpp != 24 || compression != 0)
        throw error(errc::decode_failure, name + ": only uncompressed 24-bit BMP is supported");
    bool top_down = height < 0;
    std::int32_t abs_h = top_down ? -height : height;
    if (width < 1 || abs_h < 1) throw error(errc::decode_failure, name + ": bad dimensions");

    std::size_t row_bytes = (static_cast<std::size_t>(width) * 3 + 3) & ~std::size_t{3};
    if (data.size() < pixel_offset + row_bytes * static_cast<std::size_t>(abs_h))
        throw error(errc::decode_failure, name + ": truncated pixel data");

    ImageBuffer img;
    img.width = width;
    img.height = abs_h;
    img.pixels.resize(static_cast<std::size_t>(width) * abs_h);
    for (std::int32_t y = 0; y < abs_h; ++y) {
        std::int32_t src_row = top_down ? y : abs_h - 1 - y;
        const unsigned char* row = &data[pixel_offset + row_bytes * static_cast<std::size_t>(src_row)];
        for (std::int32_t x = 0; x < width; ++x) {
            const unsigned char* px = row + 3 * static_cast<std::size_t>(x); // BGR order
            img.pixels[static_cast<std::size_t>(y) * width + x] = rgb_from_8bit(px[2], px[1], px[0]);
        }
    }
    return img;
}

void write_bmp_file(const ImageBuffer& img, const std::string& path) {
    if (img.width < 1 || img.height < 1 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height))
        throw error(errc::empty_image, "cannot encode an empty image");

    std::size_t row_bytes = (static_cast<std::size_t>(img.width) * 3 + 3) & ~std::size_t{3};
    std::size_t pixel_bytes = row_bytes * static_cast<std::size_t>(img.height);

    std::vector<unsigned char> out;
    out.reserve(54 + pixel_bytes);
    out.push_back('B');
    out.push_back('M');
    wr_u32(out, static_cast<std::uint32_t>(54 + pixel_bytes));
    wr_u32(out, 0);
    wr_u32(out, 54);
    wr_u32(out, 40);
    wr_u32(out, static_cast<std::uint32_t>(img.width));
    wr_u32(out, static_cast<std::uint32_t>(img.height)); // bottom-up
    wr_u16(out, 1);
    wr_u16(out, 24);
    wr_u32(out, 0);
    wr_u32(out, static_cast<std::uint32_t>(pixel_bytes));
    wr_u32(out, 2835);
    wr_u32(out, 2835);
    wr_u32(out, 0);
    wr_u32(out, 0);

    for (int y = img.height - 1; y >= 0; --y) {
        std::size_t start = out.size();
        for (int x = 0; x < img.width; ++x) {
            int r, g, b;
            rgb_to_8bit(img.pixels[static_cast<std::size_t>(y) * img.width + x], r, g, b);
            out.push_back(static_cast<unsigned char>(b));
            out.push_back(static_cast<unsigned char>(g));
            out.push_back(static_cast<unsigned char>(r));
        }
        while (out.size() - start < row_bytes) out.push_back(0);
    }

    std::ofstream os(path, std::ios::binary);
    if (!os) throw error(errc::decode_failure, "cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

ImageBuffer decode_image_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error(errc::decode_failure, "cannot open " + path);
    unsigned char magic[8] = {0};
    is.read(reinterpret_cast<char*>(magic), sizeof(magic));
    auto got = is.gcount();
    is.clear();
    is.seekg(0);
    if (got >= 8 && magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') {
        is.close();
        return decode_png_file(path);
    }
    if (got >= 2 && magic[0] == 'B' && magic[1] == 'M') return decode_bmp(is, path);
    throw error(errc::decode_failure, path + ": unrecognized image format (PNG or BMP expected)");
}

} // namespace colibri
