#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace scriptrace {

enum class ClusterMethod { KMeans, MiniBatchKMeans, FuzzyCMeans, AgglomerativeAvgLink };

ClusterMethod clusterMethodFromName(const std::string& name);
std::string clusterMethodName(ClusterMethod m);

struct ClusterAssignment {
    std::vector<int> labels;  // one per item, in [0, k)
    int k = 0;
    // Lloyd / fuzzy objective per iteration, non-increasing; empty for
    // minibatch and agglomerative
    std::vector<double> objectiveHistory;
};

// Deterministic for a given seed. kmeans = Lloyd with k-means++ seeding;
// fuzzy exponent 2.0, defuzzified by max membership; agglomerative = average
// linkage cut at k clusters, labels ordered by smallest member index.
ClusterAssignment clusterVectors(const std::vector<std::vector<double>>& vectors,
                                 int k, ClusterMethod method,
                                 std::uint64_t seed);

// Mutual information normalized by the arithmetic mean of the entropies;
// 0 when the denominator vanishes.
double nmi(const std::vector<int>& labelsA, const std::vector<int>& labelsB);

struct PageGroupLabel {
    int label = -1;
    bool unassigned = false;  // modal-cluster tie
};

// perPlotPageLabels[plot][page] = cluster of that page in that plot;
// page label = modal cluster across plots, ties flagged unassigned.
std::vector<PageGroupLabel> majorityGroupPages(
    const std::vector<std::vector<int>>& perPlotPageLabels);

struct SpeedRecord {
    double strokeLength = 0.0;  // pixels
    double elapsed = 1.0;       // seconds
    double speed() const { return strokeLength / elapsed; }
};

struct SpeedThresholds {
    double mu = 0.0, sigma = 0.0;
    double alphaS = 2.0;
    double t1() const { return std::ceil(mu + alphaS * sigma); }
    double t2() const { return std::ceil(mu - alphaS * sigma); }
};

enum class Style { Slow, Medium, Fast };

std::string styleName(Style s);
Style styleFromName(const std::string& name);

// fast iff s > T1; slow iff s < T2; medium otherwise (boundaries inclusive).
Style speedLabel(const SpeedRecord& record, const SpeedThresholds& th);

SpeedThresholds speedThresholdsFrom(const std::vector<SpeedRecord>& records);

}  // namespace scriptrace
