#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scriptrace {

struct Point {
    int row = 0;
    int col = 0;
    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

/// 8-bit grayscale raster, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 255)
        : width_(width), height_(height),
          pixels_(static_cast<std::size_t>(width) * height, fill) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint8_t at(int row, int col) const {
        return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }
    std::uint8_t& at(int row, int col) {
        return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Binary ink mask; 1 = ink, 0 = background.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * height, fill) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("BinaryImage: dimensions must be >= 1");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool at(int row, int col) const {
        return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
    }
    void set(int row, int col, bool v) {
        bits_[static_cast<std::size_t>(row) * width_ + col] = v ? 1 : 0;
    }
    bool inBounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }
    /// at() with out-of-bounds treated as background.
    bool atSafe(int row, int col) const {
        return inBounds(row, col) && at(row, col);
    }
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

    int inkCount() const {
        int n = 0;
        for (auto b : bits_) n += b != 0;
        return n;
    }

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct BBox {
    int top = 0, left = 0, bottom = -1, right = -1;  // inclusive
    int width() const { return right - left + 1; }
    int height() const { return bottom - top + 1; }
    bool empty() const { return bottom < top || right < left; }
    void include(int row, int col) {
        if (empty()) {
            top = bottom = row;
            left = right = col;
        } else {
            if (row < top) top = row;
            if (row > bottom) bottom = row;
            if (col < left) left = col;
            if (col > right) right = col;
        }
    }
    bool contains(int row, int col) const {
        return row >= top && row <= bottom && col >= left && col <= right;
    }
};

}  // namespace scriptrace
