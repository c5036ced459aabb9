#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scriptrace/features.hpp"
#include "scriptrace/verify.hpp"

namespace scriptrace {

struct ClassifierConfig {
    enum class Backend { NearestCentroid, Knn, LinearOneVsAll };
    Backend backend = Backend::NearestCentroid;
    int k = 3;                                              // knn
    DistanceMeasure measure = DistanceMeasure::minkowski(2);  // knn
    int epochs = 200;                                       // linear
    double learningRate = 0.1;                              // linear
    static ClassifierConfig fromName(const std::string& name);
};

class ClassifierModel {
public:
    ClassifierConfig config;
    std::vector<std::string> writerIds;  // sorted

    // one finite score per writer, higher = more likely
    std::vector<double> predictScores(const std::vector<double>& x) const;
    // argmax over scores; ties resolve to the smallest writer id
    std::string predict(const std::vector<double>& x) const;

    // linear backend: per-epoch training loss, non-increasing
    std::vector<double> lossHistory;

    // fitted parameters
    std::vector<std::vector<double>> centroids;       // nearestCentroid
    std::vector<std::vector<double>> trainVectors;    // knn
    std::vector<int> trainLabels;                     // knn, writer index
    std::vector<std::vector<double>> weights;         // linear, per writer
    std::vector<double> biases;                       // linear
};

// Throws on fewer than 2 distinct labels or inconsistent dimensions.
ClassifierModel fit(const ClassifierConfig& cfg,
                    const std::vector<FeatureVector>& train,
                    const std::vector<std::string>& labels);

struct PageDecision {
    std::string pageId;
    std::vector<std::string> perPatchLabels;  // Strategy-Major only
    std::string finalWriter;
    std::vector<double> scoreVector;  // per writer, aligned with writerIds
};

// Each patch classified independently; page writer = modal label,
// ties resolve to the smallest writer id.
PageDecision strategyMajor(const ClassifierModel& model,
                           const std::vector<FeatureVector>& patches);

// m_p = per-patch scalar means in canonical patch order (dimension nP);
// the model must have been fitted on such vectors.
PageDecision strategyMean(const ClassifierModel& model,
                          const std::vector<FeatureVector>& patches, int nP);

std::vector<double> meanVector(const std::vector<FeatureVector>& patches);

// Fraction of pages whose true writer scores at least as high as the N-th
// best score (ties at rank N count as hits).
double topNAccuracy(const std::vector<std::vector<double>>& scoreVectors,
                    const std::vector<int>& truthIndices, int n);

}  // namespace scriptrace
