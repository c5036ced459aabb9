#pragma once

#include <vector>

#include "scriptrace/imaging.hpp"

namespace scriptrace {

struct TextLine {
    BBox bbox;
    std::vector<int> componentIds;
    double skewProxy = 0.0;  // least-squares slope through component centroids
};

struct CharacterBox {
    BBox bbox;
    double cgRow = 0.0;  // center of gravity of ink
    double cgCol = 0.0;
};

struct SegmentationConfig {
    double smallComponentAreaFactor = 0.1;  // vs. median component area
    double wordGapFactor = 1.5;             // vs. median within-line gap
    double charOverlapFraction = 0.5;       // horizontal overlap to merge
};

struct PageSegmentation {
    std::vector<TextLine> lines;
    std::vector<BBox> words;
    std::vector<CharacterBox> characters;
};

// Projection/gap baseline segmentation. Blank pages give empty results.
PageSegmentation segmentPage(const BinaryImage& img,
                             const SegmentationConfig& cfg = {});

}  // namespace scriptrace
