#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scriptrace/imaging.hpp"

namespace scriptrace {

struct AugmentConfig {
    double alphaD = 0.1;  // drop ratio over the page character count
    std::uint64_t seed = 0;
};

// Edges whose removal keeps the component count constant: self-loops and
// cycle (non-bridge) edges. Bridges would split a component.
std::vector<int> droppableEdges(const StrokeGraph& g);

struct DropResult {
    BinaryImage page;
    int removedEdges = 0;
    bool warning = false;  // set when nothing could be dropped
};

// Removes ceil(alphaD * nD) edges (or as many as stay droppable under
// sequential recomputation) and erases their full-width ink. Ink pixels are
// assigned to their nearest skeleton pixel by flooding, so the surviving ink
// stays attached to the surviving skeleton and the component count never
// increases.
DropResult dropStrokes(const BinaryImage& page, const StrokeGraph& g, int nD,
                       const AugmentConfig& cfg);

enum class PageHalf { Top, Bottom, Full };

struct ExpandedSample {
    std::string parentPageId;
    PageHalf half = PageHalf::Full;
    int variantIndex = 0;  // 0 = unaugmented, 1..10 = DropStroke variants
    BinaryImage image;
    std::string id() const;
};

// Splits the page at the projection valley nearest mid-height and emits
// 2 halves + 10 DropStroke variants each = 22 samples.
// Throws "expandPage: TooShort" on pages with fewer than 2 text lines.
std::vector<ExpandedSample> expandPage(const BinaryImage& page,
                                       const std::string& pageId,
                                       const AugmentConfig& cfg);

struct Split211 {
    std::vector<ExpandedSample> train, validation, test;
};

// train = all 22 samples of page 1; validation/test = top/bottom 11 of page 2.
// Throws "split211: IncompleteSet" unless both pages carry 22 samples.
Split211 split211(const std::vector<ExpandedSample>& page1,
                  const std::vector<ExpandedSample>& page2);

}  // namespace scriptrace
