#pragma once

#include <string>
#include <vector>

namespace scriptrace {

struct DistanceMeasure {
    enum class Kind { Minkowski, Bhattacharyya, ChiSquare, Hausdorff };
    Kind kind = Kind::Minkowski;
    int order = 2;  // minkowski only, 1..5

    static DistanceMeasure minkowski(int order) {
        return {Kind::Minkowski, order};
    }
    static DistanceMeasure bhattacharyya() { return {Kind::Bhattacharyya, 0}; }
    static DistanceMeasure chiSquare() { return {Kind::ChiSquare, 0}; }
    static DistanceMeasure hausdorff() { return {Kind::Hausdorff, 0}; }
    static DistanceMeasure fromName(const std::string& name);
    std::string name() const;
};

// chi-square: sum (a_n - b_n)^2 / (a_n + b_n), zero-denominator terms
// contribute 0. bhattacharyya: -ln sum sqrt(p q) on sum-normalized vectors.
// hausdorff: max directed max-of-min over the two scalar value sets.
double distance(const std::vector<double>& a, const std::vector<double>& b,
                const DistanceMeasure& m);

struct VerificationCurve {
    std::vector<double> thresholds;  // ascending
    std::vector<double> far;         // non-decreasing
    std::vector<double> frr;         // non-increasing
    double eer = 0.0;
    double accuracyPct = 0.0;  // (1 - eer) * 100
};

// Empirical FAR/FRR over the union of observed distances; EER by linear
// interpolation at the FAR = FRR crossing.
VerificationCurve farFrrCurve(const std::vector<double>& diffDistances,
                              const std::vector<double>& sameDistances);

double euclideanDw(const std::vector<double>& a, const std::vector<double>& b);

struct ContrastiveParams {
    double alpha = 0.5;
    double beta = 0.5;
    double margin = 1.0;
};

// label 1 = same writer (genuine), 0 = different.
double contrastiveLoss(double dw, int label, const ContrastiveParams& p);

// mean of squared pair distances; the conventional margin choice
double defaultMargin(const std::vector<double>& pairDistances);

struct PairDw {
    std::string idA, idB;
    double dw = 0.0;
};

struct SweepResult {
    double step = 0.1;
    double bestD = 0.0;
    double tpr = 0.0, tnr = 0.0;  // at bestD
    double accuracy = 0.0;        // max over d of (TPR + TNR) / 2
};

// d sweeps [min Dw, max Dw] in steps of 0.1; predicted same when Dw <= d.
// Ties on accuracy resolve to the smallest d.
SweepResult thresholdSweep(const std::vector<PairDw>& samePairs,
                           const std::vector<PairDw>& diffPairs);

}  // namespace scriptrace
