#include "scriptrace/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scriptrace {

DistanceMeasure DistanceMeasure::fromName(const std::string& name) {
    if (name.rfind("minkowski", 0) == 0) {
        const int order = name.size() > 9 ? std::stoi(name.substr(9)) : 2;
        if (order < 1 || order > 5)
            throw std::invalid_argument("minkowski order must be in 1..5");
        return minkowski(order);
    }
    if (name == "euclidean") return minkowski(2);
    if (name == "bhattacharyya") return bhattacharyya();
    if (name == "chi-square" || name == "chisquare") return chiSquare();
    if (name == "hausdorff") return hausdorff();
    throw std::invalid_argument("unknown distance measure: " + name);
}

std::string DistanceMeasure::name() const {
    switch (kind) {
        case Kind::Minkowski: return "minkowski" + std::to_string(order);
        case Kind::Bhattacharyya: return "bhattacharyya";
        case Kind::ChiSquare: return "chi-square";
        case Kind::Hausdorff: return "hausdorff";
    }
    return "";
}

double distance(const std::vector<double>& a, const std::vector<double>& b,
                const DistanceMeasure& m) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    switch (m.kind) {
        case DistanceMeasure::Kind::Minkowski: {
            if (m.order < 1 || m.order > 5)
                throw std::invalid_argument("minkowski order must be in 1..5");
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                s += std::pow(std::abs(a[i] - b[i]), m.order);
            return std::pow(s, 1.0 / m.order);
        }
        case DistanceMeasure::Kind::ChiSquare: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double den = a[i] + b[i];
                if (den != 0.0) s += (a[i] - b[i]) * (a[i] - b[i]) / den;
            }
            return s;
        }
        case DistanceMeasure::Kind::Bhattacharyya: {
            double sa = 0.0, sb = 0.0;
            for (double v : a) sa += v;
            for (double v : b) sb += v;
            if (sa == 0.0 || sb == 0.0)
                throw std::invalid_argument("bhattacharyya: all-zero vector");
            double bc = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                bc += std::sqrt((a[i] / sa) * (b[i] / sb));
            return -std::log(std::max(bc, 1e-300));
        }
        case DistanceMeasure::Kind::Hausdorff: {
            auto directed = [](const std::vector<double>& x,
                               const std::vector<double>& y) {
                double worst = 0.0;
                for (double xv : x) {
                    double best = std::numeric_limits<double>::infinity();
                    for (double yv : y) best = std::min(best, std::abs(xv - yv));
                    worst = std::max(worst, best);
                }
                return worst;
            };
            return std::max(directed(a, b), directed(b, a));
        }
    }
    return 0.0;
}

VerificationCurve farFrrCurve(const std::vector<double>& diffDistances,
                              const std::vector<double>& sameDistances) {
    if (diffDistances.empty() || sameDistances.empty())
        throw std::invalid_argument("farFrrCurve: empty distance list");

    std::vector<double> thresholds;
    thresholds.reserve(diffDistances.size() + sameDistances.size() + 1);
    thresholds.insert(thresholds.end(), diffDistances.begin(), diffDistances.end());
    thresholds.insert(thresholds.end(), sameDistances.begin(), sameDistances.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    // a leading threshold below every observation anchors FAR=0 / FRR=1
    thresholds.insert(thresholds.begin(), thresholds.front() - 1.0);

    std::vector<double> sortedDiff = diffDistances;
    std::vector<double> sortedSame = sameDistances;
    std::sort(sortedDiff.begin(), sortedDiff.end());
    std::sort(sortedSame.begin(), sortedSame.end());

    VerificationCurve curve;
    curve.thresholds = thresholds;
    for (double t : thresholds) {
        const auto nd = std::upper_bound(sortedDiff.begin(), sortedDiff.end(), t) -
                        sortedDiff.begin();
        const auto ns = std::upper_bound(sortedSame.begin(), sortedSame.end(), t) -
                        sortedSame.begin();
        curve.far.push_back(static_cast<double>(nd) / sortedDiff.size());
        curve.frr.push_back(1.0 -
                            static_cast<double>(ns) / sortedSame.size());
    }

    // g = FAR - FRR rises from -1 to +1; interpolate the zero crossing
    double eer = 0.5;
    for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
        const double g0 = curve.far[i] - curve.frr[i];
        const double g1 = curve.far[i + 1] - curve.frr[i + 1];
        if (g0 <= 0.0 && g1 >= 0.0) {
            if (g1 == g0) {
                eer = curve.far[i];
            } else {
                const double t = -g0 / (g1 - g0);
                eer = curve.far[i] + t * (curve.far[i + 1] - curve.far[i]);
            }
            break;
        }
    }
    curve.eer = eer;
    curve.accuracyPct = (1.0 - eer) * 100.0;
    return curve;
}

double euclideanDw(const std::vector<double>& a, const std::vector<double>& b) {
    return distance(a, b, DistanceMeasure::minkowski(2));
}

double contrastiveLoss(double dw, int label, const ContrastiveParams& p) {
    if (dw < 0.0) throw std::invalid_argument("contrastiveLoss: Dw < 0");
    if (label != 0 && label != 1)
        throw std::invalid_argument("contrastiveLoss: label must be 0 or 1");
    const double hinge = std::max(0.0, p.margin - dw);
    return p.alpha * (1 - label) * dw * dw + p.beta * label * hinge * hinge;
}

double defaultMargin(const std::vector<double>& pairDistances) {
    if (pairDistances.empty())
        throw std::invalid_argument("defaultMargin: empty distance list");
    double s = 0.0;
    for (double d : pairDistances) s += d * d;
    return s / pairDistances.size();
}

SweepResult thresholdSweep(const std::vector<PairDw>& samePairs,
                           const std::vector<PairDw>& diffPairs) {
    if (samePairs.empty() || diffPairs.empty())
        throw std::invalid_argument("thresholdSweep: empty pair list");

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : samePairs) {
        lo = std::min(lo, p.dw);
        hi = std::max(hi, p.dw);
    }
    for (const auto& p : diffPairs) {
        lo = std::min(lo, p.dw);
        hi = std::max(hi, p.dw);
    }

    SweepResult res;
    res.accuracy = -1.0;
    for (double d = lo; d <= hi + 1e-12; d += 0.1) {
        int tp = 0, tn = 0;
        for (const auto& p : samePairs) tp += p.dw <= d;
        for (const auto& p : diffPairs) tn += p.dw > d;
        const double tpr = static_cast<double>(tp) / samePairs.size();
        const double tnr = static_cast<double>(tn) / diffPairs.size();
        const double acc = (tpr + tnr) / 2.0;
        if (acc > res.accuracy) {
            res.accuracy = acc;
            res.bestD = d;
            res.tpr = tpr;
            res.tnr = tnr;
        }
    }
    return res;
}

}  // namespace scriptrace
