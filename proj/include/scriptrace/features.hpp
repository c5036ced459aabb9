#pragma once

#include <string>
#include <vector>

#include "scriptrace/imaging.hpp"
#include "scriptrace/segmentation.hpp"

namespace scriptrace {

enum class FeatureFamily { FMM, FDH, FDC, Ingested };

std::string familyName(FeatureFamily f);
FeatureFamily familyFromName(const std::string& name);

struct FeatureVector {
    std::string id;
    FeatureFamily family = FeatureFamily::Ingested;
    std::vector<double> values;
    int dim() const { return static_cast<int>(values.size()); }
};

// Dimension contracts
inline constexpr int kDimFdh = 312;  // 12 direction + 300 hinge
inline constexpr int kDimFdc = 800;  // 4 x 200
inline constexpr int kDimFmm = 528;  // 16 macro + 512 micro histogram

// epsilon = max(2, floor(mu_sw - sigma_sw))
int computeEpsilon(const StrokeStats& stats);

// f_cd: 12-bin contour direction histogram over [0, 180) degrees.
std::vector<double> contourDirectionHist(const std::vector<Contour>& contours,
                                         int epsilon);

// f_ch: 300-bin contour hinge histogram; two leg angles over 360 degrees,
// ordered pairs at 15 degrees per bin.
std::vector<double> contourHingeHist(const std::vector<Contour>& contours,
                                     int epsilon);

// F_DH = f_cd ++ f_ch (dim 312).
FeatureVector extractFDH(const std::vector<Contour>& contours,
                         const StrokeStats& stats);

// F_DC: direction cos/sin between connected keypoints and curvature cos/sin
// over keypoint triples, four 200-bin histograms over [-1, 1] (dim 800).
FeatureVector keypointDirectionCurvature(const StrokeGraph& g);

// Raw (cos, sin) samples feeding the F_DC histograms; exposed for property
// checks (cos^2 + sin^2 = 1 per emitted pair).
struct DirectionSamples {
    std::vector<double> dirCos, dirSin;    // per connected keypoint pair
    std::vector<double> curvCos, curvSin;  // per keypoint triple
};
DirectionSamples collectDirectionSamples(const StrokeGraph& g);

// F_MM: 16 macro features + 512-bin micro histogram (dim 528).
struct PageArtifacts {
    const GrayImage* gray = nullptr;
    const BinaryImage* binary = nullptr;
    int otsuThreshold = 0;
    const std::vector<Contour>* contours = nullptr;
    const PageSegmentation* segmentation = nullptr;
};
FeatureVector extractFMM(const PageArtifacts& page);

// 512-bit gradient/structural/concavity code for one character raster.
std::vector<bool> microFeatureBits(const BinaryImage& charRaster);

}  // namespace scriptrace
