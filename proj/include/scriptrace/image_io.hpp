#pragma once

#include <string>

#include "scriptrace/image.hpp"

namespace scriptrace {

// Reads an 8-bit grayscale PNG or PGM (P5); format chosen by magic bytes.
// Color PNGs are converted to gray; 16-bit inputs are rejected.
GrayImage readGray(const std::string& path);

void writePng(const std::string& path, const GrayImage& img);
void writePgm(const std::string& path, const GrayImage& img);

// Debug raster helper: ink black on white paper.
GrayImage toGray(const BinaryImage& mask);

}  // namespace scriptrace
