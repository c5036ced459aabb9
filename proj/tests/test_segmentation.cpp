#include <doctest.h>

#include "scriptrace/segmentation.hpp"
#include "test_util.hpp"

using namespace scriptrace;

namespace {

void stampBlock(BinaryImage& img, int top, int left, int h, int w) {
    for (int r = top; r < top + h; ++r)
        for (int c = left; c < left + w; ++c) img.set(r, c, true);
}

}  // namespace

TEST_CASE("segmentPage: blank page gives empty results") {
    BinaryImage img(64, 64);
    const auto seg = segmentPage(img);
    CHECK(seg.lines.empty());
    CHECK(seg.words.empty());
    CHECK(seg.characters.empty());
}

TEST_CASE("segmentPage: one line of five widely spaced glyphs") {
    BinaryImage img(200, 40);
    for (int i = 0; i < 5; ++i) stampBlock(img, 12, 10 + i * 40, 12, 8);
    const auto seg = segmentPage(img);
    CHECK(seg.lines.size() == 1);
    CHECK(seg.words.size() == 5);
    CHECK(seg.characters.size() == 5);
    for (const auto& cb : seg.characters) {
        CHECK(cb.bbox.contains(static_cast<int>(cb.cgRow),
                               static_cast<int>(cb.cgCol)));
    }
}

TEST_CASE("segmentPage: two bands separated by wide whitespace") {
    BinaryImage img(120, 120);
    for (int i = 0; i < 4; ++i) stampBlock(img, 10, 8 + i * 25, 14, 10);
    for (int i = 0; i < 4; ++i) stampBlock(img, 80, 8 + i * 25, 14, 10);
    const auto seg = segmentPage(img);
    CHECK(seg.lines.size() == 2);
}

TEST_CASE("segmentPage: small components are discarded") {
    BinaryImage img(100, 40);
    for (int i = 0; i < 4; ++i) stampBlock(img, 10, 8 + i * 22, 14, 10);
    img.set(12, 90, true);  // lone dot
    const auto seg = segmentPage(img);
    CHECK(seg.characters.size() == 4);
}

TEST_CASE("segmentPage: overlapping components merge into one character") {
    BinaryImage img(60, 40);
    stampBlock(img, 8, 20, 6, 12);   // upper part
    stampBlock(img, 16, 22, 6, 12);  // lower part, 2-px vertical gap
    const auto seg = segmentPage(img);
    CHECK(seg.characters.size() == 1);
}

TEST_CASE("segmentPage: every retained component is in exactly one line") {
    BinaryImage img(150, 90);
    for (int i = 0; i < 3; ++i) stampBlock(img, 10, 10 + i * 40, 12, 14);
    for (int i = 0; i < 3; ++i) stampBlock(img, 60, 10 + i * 40, 12, 14);
    const auto seg = segmentPage(img);
    std::size_t total = 0;
    for (const auto& line : seg.lines) total += line.componentIds.size();
    CHECK(total == 6);
}
