#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scriptrace/cluster.hpp"
#include "scriptrace/image.hpp"

namespace scriptrace {

struct SynthConfig {
    int writerCount = 25;
    int pagesPerStyle = 2;
    double styleSeverity = 0.7;  // 0 = styles render identically
    std::uint64_t seed = 0;
    int glyphsPerLine = 8;
    int linesPerPage = 4;
};

struct SynthPage {
    std::string pageId;
    std::string writerId;
    Style style = Style::Medium;
    int pageIndex = 0;
    GrayImage image;
    double strokeLengthPx = 0.0;
    double elapsedSeconds = 0.0;
};

// Per-writer pseudo-glyph alphabets rendered as Bezier strokes. Page content
// (glyph choice, layout jitter) depends only on (seed, writer, pageIndex), so
// severity 0 makes the three style renders pixel-identical per page index;
// positive severity shears and warps glyphs per (writer, style).
std::vector<SynthPage> synthPages(const SynthConfig& cfg);

}  // namespace scriptrace
