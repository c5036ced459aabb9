#include "scriptrace/identify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace scriptrace {

ClassifierConfig ClassifierConfig::fromName(const std::string& name) {
    ClassifierConfig cfg;
    if (name == "nearest-centroid") {
        cfg.backend = Backend::NearestCentroid;
    } else if (name == "knn") {
        cfg.backend = Backend::Knn;
    } else if (name == "linear") {
        cfg.backend = Backend::LinearOneVsAll;
    } else {
        throw std::invalid_argument("unknown classifier backend: " + name);
    }
    return cfg;
}

namespace {

double hingeLoss(const std::vector<std::vector<double>>& x,
                 const std::vector<int>& y, int writer,
                 const std::vector<double>& w, double b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double target = y[i] == writer ? 1.0 : -1.0;
        double score = b;
        for (std::size_t d = 0; d < w.size(); ++d) score += w[d] * x[i][d];
        loss += std::max(0.0, 1.0 - target * score);
    }
    return loss / x.size();
}

void trainOneVsAll(const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, int writer, int epochs,
                   double lr, std::vector<double>& w, double& b,
                   std::vector<double>& lossOut) {
    const std::size_t dim = x.front().size();
    w.assign(dim, 0.0);
    b = 0.0;
    double loss = hingeLoss(x, y, writer, w, b);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        // full-batch subgradient
        std::vector<double> gw(dim, 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double target = y[i] == writer ? 1.0 : -1.0;
            double score = b;
            for (std::size_t d = 0; d < dim; ++d) score += w[d] * x[i][d];
            if (target * score < 1.0) {
                for (std::size_t d = 0; d < dim; ++d) gw[d] -= target * x[i][d];
                gb -= target;
            }
        }
        for (auto& g : gw) g /= x.size();
        gb /= x.size();

        // halving line search keeps the loss monotone non-increasing
        double step = lr;
        while (step > 1e-12) {
            std::vector<double> wTry = w;
            for (std::size_t d = 0; d < dim; ++d) wTry[d] -= step * gw[d];
            const double bTry = b - step * gb;
            const double lossTry = hingeLoss(x, y, writer, wTry, bTry);
            if (lossTry <= loss) {
                w = std::move(wTry);
                b = bTry;
                loss = lossTry;
                break;
            }
            step /= 2.0;
        }
        lossOut.push_back(loss);
    }
}

}  // namespace

ClassifierModel fit(const ClassifierConfig& cfg,
                    const std::vector<FeatureVector>& train,
                    const std::vector<std::string>& labels) {
    if (train.size() != labels.size() || train.empty())
        throw std::invalid_argument("fit: samples and labels must align");
    const std::size_t dim = train.front().values.size();
    for (const auto& fv : train)
        if (fv.values.size() != dim)
            throw std::invalid_argument("fit: dimension mismatch");

    ClassifierModel model;
    model.config = cfg;
    std::set<std::string> ids(labels.begin(), labels.end());
    if (ids.size() < 2)
        throw std::invalid_argument("fit: need at least 2 writers");
    model.writerIds.assign(ids.begin(), ids.end());

    auto writerIndex = [&](const std::string& id) {
        return static_cast<int>(std::lower_bound(model.writerIds.begin(),
                                                 model.writerIds.end(), id) -
                                model.writerIds.begin());
    };
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = writerIndex(labels[i]);

    switch (cfg.backend) {
        case ClassifierConfig::Backend::NearestCentroid: {
            model.centroids.assign(model.writerIds.size(),
                                   std::vector<double>(dim, 0.0));
            std::vector<int> counts(model.writerIds.size(), 0);
            for (std::size_t i = 0; i < train.size(); ++i) {
                ++counts[y[i]];
                for (std::size_t d = 0; d < dim; ++d)
                    model.centroids[y[i]][d] += train[i].values[d];
            }
            for (std::size_t w = 0; w < model.centroids.size(); ++w)
                for (auto& v : model.centroids[w]) v /= counts[w];
            break;
        }
        case ClassifierConfig::Backend::Knn: {
            for (const auto& fv : train) model.trainVectors.push_back(fv.values);
            model.trainLabels = y;
            break;
        }
        case ClassifierConfig::Backend::LinearOneVsAll: {
            std::vector<std::vector<double>> x;
            for (const auto& fv : train) x.push_back(fv.values);
            model.weights.assign(model.writerIds.size(), {});
            model.biases.assign(model.writerIds.size(), 0.0);
            std::vector<double> totalLoss(cfg.epochs, 0.0);
            for (std::size_t w = 0; w < model.writerIds.size(); ++w) {
                std::vector<double> lossW;
                trainOneVsAll(x, y, static_cast<int>(w), cfg.epochs,
                              cfg.learningRate, model.weights[w],
                              model.biases[w], lossW);
                for (int e = 0; e < cfg.epochs; ++e) totalLoss[e] += lossW[e];
            }
            model.lossHistory = std::move(totalLoss);
            break;
        }
    }
    return model;
}

std::vector<double> ClassifierModel::predictScores(
    const std::vector<double>& x) const {
    std::vector<double> scores(writerIds.size(), 0.0);
    switch (config.backend) {
        case ClassifierConfig::Backend::NearestCentroid:
            for (std::size_t w = 0; w < centroids.size(); ++w)
                scores[w] = -euclideanDw(x, centroids[w]);
            break;
        case ClassifierConfig::Backend::Knn: {
            std::vector<std::pair<double, std::size_t>> dists;
            dists.reserve(trainVectors.size());
            for (std::size_t i = 0; i < trainVectors.size(); ++i)
                dists.push_back({distance(x, trainVectors[i], config.measure), i});
            const std::size_t k =
                std::min<std::size_t>(config.k, dists.size());
            std::partial_sort(dists.begin(), dists.begin() + k, dists.end());
            for (std::size_t i = 0; i < k; ++i)
                scores[trainLabels[dists[i].second]] += 1.0;
            break;
        }
        case ClassifierConfig::Backend::LinearOneVsAll:
            for (std::size_t w = 0; w < weights.size(); ++w) {
                double s = biases[w];
                for (std::size_t d = 0; d < x.size(); ++d)
                    s += weights[w][d] * x[d];
                scores[w] = s;
            }
            break;
    }
    return scores;
}

std::string ClassifierModel::predict(const std::vector<double>& x) const {
    const auto scores = predictScores(x);
    std::size_t best = 0;
    for (std::size_t w = 1; w < scores.size(); ++w)
        if (scores[w] > scores[best]) best = w;  // ties keep the smaller id
    return writerIds[best];
}

PageDecision strategyMajor(const ClassifierModel& model,
                           const std::vector<FeatureVector>& patches) {
    if (patches.empty())
        throw std::invalid_argument("strategyMajor: no patches");
    PageDecision d;
    d.scoreVector.assign(model.writerIds.size(), 0.0);
    for (const auto& p : patches) {
        const auto label = model.predict(p.values);
        d.perPatchLabels.push_back(label);
        const auto it = std::lower_bound(model.writerIds.begin(),
                                         model.writerIds.end(), label);
        d.scoreVector[it - model.writerIds.begin()] += 1.0;
    }
    std::size_t best = 0;
    for (std::size_t w = 1; w < d.scoreVector.size(); ++w)
        if (d.scoreVector[w] > d.scoreVector[best]) best = w;
    d.finalWriter = model.writerIds[best];
    return d;
}

PageDecision strategyMean(const ClassifierModel& model,
                          const std::vector<FeatureVector>& patches, int nP) {
    if (static_cast<int>(patches.size()) != nP)
        throw std::invalid_argument("strategyMean: patch count mismatch");
    PageDecision d;
    d.scoreVector = model.predictScores(meanVector(patches));
    std::size_t best = 0;
    for (std::size_t w = 1; w < d.scoreVector.size(); ++w)
        if (d.scoreVector[w] > d.scoreVector[best]) best = w;
    d.finalWriter = model.writerIds[best];
    return d;
}

std::vector<double> meanVector(const std::vector<FeatureVector>& patches) {
    std::vector<double> mp;
    mp.reserve(patches.size());
    for (const auto& p : patches) {
        if (p.values.empty())
            throw std::invalid_argument("meanVector: empty patch vector");
        mp.push_back(std::accumulate(p.values.begin(), p.values.end(), 0.0) /
                     p.values.size());
    }
    return mp;
}

double topNAccuracy(const std::vector<std::vector<double>>& scoreVectors,
                    const std::vector<int>& truthIndices, int n) {
    if (scoreVectors.size() != truthIndices.size())
        throw std::invalid_argument("topNAccuracy: size mismatch");
    if (n < 1) throw std::invalid_argument("topNAccuracy: N must be >= 1");
    if (scoreVectors.empty()) return 0.0;
    int hits = 0;
    for (std::size_t i = 0; i < scoreVectors.size(); ++i) {
        std::vector<double> sorted = scoreVectors[i];
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const std::size_t rank = std::min<std::size_t>(n, sorted.size());
        const double cutoff = sorted[rank - 1];
        if (scoreVectors[i][truthIndices[i]] >= cutoff) ++hits;
    }
    return static_cast<double>(hits) / scoreVectors.size();
}

}  // namespace scriptrace
