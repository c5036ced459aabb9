#pragma once

#include <cstdint>
#include <vector>

#include "scriptrace/image.hpp"

namespace scriptrace {

struct Skeleton {
    BinaryImage image;     // 1-pixel-wide strokes
    int strokeLengthPx = 0;
};

struct StrokeStats {
    double meanWidth = 0.0;  // mu_sw, pixels
    double stdWidth = 0.0;   // sigma_sw, pixels
};

enum class ContourKind { Exterior, Interior };

struct Contour {
    std::vector<Point> points;  // closed 8-connected chain
    ContourKind kind = ContourKind::Exterior;
};

enum class KeypointKind { End, Branch, Curved };

struct Keypoint {
    Point position;
    KeypointKind kind = KeypointKind::End;
};

struct StrokeEdge {
    int nodeA = -1;
    int nodeB = -1;
    std::vector<Point> path;  // interior pixels, ordered from nodeA to nodeB
};

struct StrokeGraph {
    std::vector<Keypoint> nodes;
    std::vector<StrokeEdge> edges;
    int componentCount = 0;
};

struct Labeling {
    std::vector<int> labels;  // row-major, 0 = background
    int count = 0;
    int width = 0;
    int height = 0;
    int at(int row, int col) const {
        return labels[static_cast<std::size_t>(row) * width + col];
    }
};

// Otsu threshold; ink = pixels strictly darker than the threshold.
struct BinarizeResult {
    BinaryImage mask;
    int threshold = 0;
};
BinarizeResult binarize(const GrayImage& img);
int otsuThreshold(const std::vector<std::size_t>& histogram);

// 8-connectivity component labeling (union-find), label 0 = background.
Labeling labelComponents(const BinaryImage& img);
int componentCount(const BinaryImage& img);

// Zhang-Suen thinning. thin() runs the OpenMP kernel, thinSerial() is the
// reference implementation kept for tests and benchmarks.
Skeleton thin(const BinaryImage& img);
Skeleton thinSerial(const BinaryImage& img);

// Exact Euclidean distance transform: per-pixel distance to the nearest
// background pixel (0 on background).
std::vector<double> distanceTransform(const BinaryImage& img);
std::vector<double> distanceTransformSerial(const BinaryImage& img);

// Stroke width sampled on skeleton pixels: width = round(2*d - 1) where d is
// the distance to the nearest background pixel. Throws on an empty skeleton.
StrokeStats strokeWidthStats(const BinaryImage& img, const Skeleton& sk);

// Iteratively removes end-to-branch paths shorter than ceil(mu_sw/2) pixels.
Skeleton pruneSpurs(const Skeleton& sk, const StrokeStats& stats);

// Moore boundary tracing: one exterior contour per component, one interior
// contour per hole.
std::vector<Contour> traceContours(const BinaryImage& img);

std::vector<Keypoint> detectKeypoints(const Skeleton& sk);

StrokeGraph buildStrokeGraph(const Skeleton& sk, const std::vector<Keypoint>& kps);

// Skeleton 8-neighbor count at (row,col).
int neighborCount(const BinaryImage& img, int row, int col);

// Connectivity degree: number of distinct ink runs in the 8-neighbor ring.
// Distinguishes true branch points from diagonal-adjacency artifacts.
int skeletonDegree(const BinaryImage& img, int row, int col);

}  // namespace scriptrace
