#include "scriptrace/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace scriptrace {

namespace {

GrayImage readPgm(std::istream& in) {
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("readGray: not a P5 PGM");
    auto nextToken = [&in]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error("readGray: truncated PGM header");
    };
    const int w = std::stoi(nextToken());
    const int h = std::stoi(nextToken());
    const int maxval = std::stoi(nextToken());
    if (maxval != 255) throw std::runtime_error("readGray: only 8-bit PGM supported");
    in.get();  // single whitespace after header
    GrayImage img(w, h);
    in.read(reinterpret_cast<char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.pixels().size()));
    if (!in) throw std::runtime_error("readGray: truncated PGM data");
    return img;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

GrayImage readPngFile(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("readGray: cannot open " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("readGray: PNG decode failed for " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int bitDepth = png_get_bit_depth(png, info);
    const int colorType = png_get_color_type(png, info);
    if (bitDepth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("readGray: 16-bit PNG not supported");
    }
    if (colorType == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (colorType & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1, -1);
    if (colorType & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (bitDepth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    GrayImage img(w, h);
    std::vector<png_bytep> rows(h);
    for (int r = 0; r < h; ++r)
        rows[r] = img.pixels().data() + static_cast<std::size_t>(r) * w;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace

GrayImage readGray(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("readGray: cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    in.seekg(0);
    if (magic[0] == 'P' && magic[1] == '5') return readPgm(in);
    in.close();
    return readPngFile(path);
}

void writePng(const std::string& path, const GrayImage& img) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("writePng: cannot open " + path);
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("writePng: PNG encode failed for " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height());
    for (int r = 0; r < img.height(); ++r)
        rows[r] = const_cast<png_bytep>(img.pixels().data() +
                                        static_cast<std::size_t>(r) * img.width());
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void writePgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("writePgm: cannot open " + path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.pixels().size()));
}

GrayImage toGray(const BinaryImage& mask) {
    GrayImage img(mask.width(), mask.height(), 255);
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c)
            if (mask.at(r, c)) img.at(r, c) = 0;
    return img;
}

}  // namespace scriptrace
