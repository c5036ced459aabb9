#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "scriptrace/identify.hpp"

using namespace scriptrace;

namespace {

FeatureVector fv(std::vector<double> v) {
    FeatureVector f;
    f.values = std::move(v);
    return f;
}

std::vector<FeatureVector> blob(std::mt19937& rng, double cx, double cy, int n) {
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<FeatureVector> out;
    for (int i = 0; i < n; ++i) out.push_back(fv({cx + noise(rng), cy + noise(rng)}));
    return out;
}

}  // namespace

TEST_CASE("fit: separable two-writer problem is learned by every backend") {
    std::mt19937 rng(1);
    std::vector<FeatureVector> train;
    std::vector<std::string> labels;
    for (const auto& s : blob(rng, 0, 0, 20)) {
        train.push_back(s);
        labels.push_back("writerA");
    }
    for (const auto& s : blob(rng, 10, 10, 20)) {
        train.push_back(s);
        labels.push_back("writerB");
    }
    for (auto backend : {ClassifierConfig::Backend::NearestCentroid,
                         ClassifierConfig::Backend::Knn,
                         ClassifierConfig::Backend::LinearOneVsAll}) {
        ClassifierConfig cfg;
        cfg.backend = backend;
        const auto model = fit(cfg, train, labels);
        for (std::size_t i = 0; i < train.size(); ++i)
            CHECK(model.predict(train[i].values) == labels[i]);
    }
}

TEST_CASE("fit: nearest centroid hand example") {
    const auto model = fit({}, {fv({0, 0}), fv({10, 10})}, {"A", "B"});
    CHECK(model.predict({1, 1}) == "A");
    CHECK(model.predict({9, 9}) == "B");
}

TEST_CASE("fit: errors on single class and ragged dimensions") {
    CHECK_THROWS(fit({}, {fv({0, 0}), fv({1, 1})}, {"A", "A"}));
    CHECK_THROWS(fit({}, {fv({0, 0}), fv({1, 1, 1})}, {"A", "B"}));
}

TEST_CASE("knn matches an exhaustive neighbor-scan oracle") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<FeatureVector> train;
    std::vector<std::string> labels;
    const std::vector<std::string> names{"w0", "w1", "w2", "w3"};
    for (int i = 0; i < 200; ++i) {
        std::vector<double> v(8);
        for (auto& x : v) x = u(rng);
        train.push_back(fv(v));
        labels.push_back(names[i % 4]);
    }
    ClassifierConfig cfg;
    cfg.backend = ClassifierConfig::Backend::Knn;
    cfg.k = 3;
    cfg.measure = DistanceMeasure::chiSquare();
    const auto model = fit(cfg, train, labels);

    for (int q = 0; q < 50; ++q) {
        std::vector<double> x(8);
        for (auto& v : x) v = u(rng);
        // oracle: full sort by (distance, index), vote, min-id tie-break
        std::vector<std::pair<double, int>> d;
        for (int i = 0; i < 200; ++i)
            d.push_back({distance(x, train[i].values, cfg.measure), i});
        std::sort(d.begin(), d.end());
        std::map<std::string, int> votes;
        for (int i = 0; i < 3; ++i) votes[labels[d[i].second]]++;
        std::string expect;
        int bestVotes = -1;
        for (const auto& [id, v] : votes)
            if (v > bestVotes) {
                bestVotes = v;
                expect = id;
            }
        CHECK(model.predict(x) == expect);
    }
}

TEST_CASE("nearestCentroid: positive rescaling preserves the argmax") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<FeatureVector> train;
    std::vector<std::string> labels;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> v(6);
        for (auto& x : v) x = u(rng);
        train.push_back(fv(v));
        labels.push_back(i % 2 ? "A" : "B");
    }
    const auto model = fit({}, train, labels);

    auto scaled = train;
    for (auto& s : scaled)
        for (auto& v : s.values) v *= 7.5;
    const auto scaledModel = fit({}, scaled, labels);
    for (int q = 0; q < 30; ++q) {
        std::vector<double> x(6);
        for (auto& v : x) v = u(rng);
        auto sx = x;
        for (auto& v : sx) v *= 7.5;
        CHECK(model.predict(x) == scaledModel.predict(sx));
    }
}

TEST_CASE("linearOneVsAll: training loss never increases") {
    std::mt19937 rng(4);
    std::vector<FeatureVector> train;
    std::vector<std::string> labels;
    for (const auto& s : blob(rng, 0, 0, 15)) {
        train.push_back(s);
        labels.push_back("A");
    }
    for (const auto& s : blob(rng, 2, 1, 15)) {
        train.push_back(s);
        labels.push_back("B");
    }
    for (const auto& s : blob(rng, -1, 3, 15)) {
        train.push_back(s);
        labels.push_back("C");
    }
    ClassifierConfig cfg;
    cfg.backend = ClassifierConfig::Backend::LinearOneVsAll;
    cfg.epochs = 100;
    const auto model = fit(cfg, train, labels);
    REQUIRE(model.lossHistory.size() == 100);
    for (std::size_t i = 1; i < model.lossHistory.size(); ++i)
        CHECK(model.lossHistory[i] <= model.lossHistory[i - 1] + 1e-12);
}

TEST_CASE("strategyMajor: majority, tie rule, permutation invariance") {
    const auto model = fit({}, {fv({0, 0}), fv({10, 10})}, {"A", "B"});
    const FeatureVector nearA = fv({1, 0});
    const FeatureVector nearB = fv({9, 10});

    CHECK(strategyMajor(model, {nearA, nearA, nearB}).finalWriter == "A");
    CHECK(strategyMajor(model, {nearA, nearB}).finalWriter == "A");  // tie -> min id

    const auto d1 = strategyMajor(model, {nearA, nearB, nearB, nearA, nearB});
    const auto d2 = strategyMajor(model, {nearB, nearB, nearA, nearB, nearA});
    CHECK(d1.finalWriter == d2.finalWriter);
    CHECK(d1.scoreVector == d2.scoreVector);
    CHECK(d1.perPatchLabels.size() == 5);
}

TEST_CASE("strategyMajor: 500 random multisets agree with a counting oracle") {
    // writers at unit corners so each patch deterministically classifies
    const auto model =
        fit({}, {fv({0, 0}), fv({10, 0}), fv({0, 10})}, {"A", "B", "C"});
    const std::vector<FeatureVector> proto{fv({0, 1}), fv({10, 1}), fv({1, 10})};
    const std::vector<std::string> names{"A", "B", "C"};
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<int> count(1, 9);
    for (int t = 0; t < 500; ++t) {
        std::vector<FeatureVector> patches;
        std::map<std::string, int> tally;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            const int w = pick(rng);
            patches.push_back(proto[w]);
            tally[names[w]]++;
        }
        std::string expect;
        int best = -1;
        for (const auto& [id, v] : tally)  // map order = min-id tie-break
            if (v > best) {
                best = v;
                expect = id;
            }
        CHECK(strategyMajor(model, patches).finalWriter == expect);
    }
}

TEST_CASE("strategyMean: literal scalar-mean vector") {
    CHECK(meanVector({fv({1, 3}), fv({5, 7})}) == std::vector<double>{2, 6});
    CHECK(meanVector({fv({4, 4, 4}), fv({4, 4, 4})}) ==
          std::vector<double>{4, 4});

    // model over m_p space: writer A near (2,6), writer B near (0,0)
    const auto model = fit({}, {fv({2, 6}), fv({0, 0})}, {"A", "B"});
    const auto d = strategyMean(model, {fv({1, 3}), fv({5, 7})}, 2);
    CHECK(d.finalWriter == "A");
    CHECK_THROWS(strategyMean(model, {fv({1, 3})}, 2));
}

TEST_CASE("topNAccuracy: rank examples and tie inclusion") {
    // writer 0 always ranked first
    CHECK(topNAccuracy({{5, 1, 0}, {9, 2, 3}}, {0, 0}, 1) == 1.0);
    // truth ranked third everywhere
    const std::vector<std::vector<double>> third{{1, 2, 5, 4, 3},
                                                 {0, 9, 8, 7, 1}};
    CHECK(topNAccuracy(third, {0, 4}, 2) == 0.0);
    CHECK(topNAccuracy(third, {0, 4}, 5) == 1.0);
    // tie at the N-th score includes the tied writer
    CHECK(topNAccuracy({{3, 3, 1}}, {1}, 1) == 1.0);
}

TEST_CASE("topNAccuracy: matches the exhaustive rank-check oracle") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::vector<double>> scores;
    std::vector<int> truth;
    std::uniform_int_distribution<int> pick(0, 99);
    for (int p = 0; p < 200; ++p) {
        std::vector<double> s(100);
        for (auto& v : s) v = u(rng);
        scores.push_back(s);
        truth.push_back(pick(rng));
    }
    for (int n : {1, 2, 5}) {
        int hits = 0;
        for (int p = 0; p < 200; ++p) {
            int higher = 0;
            for (double v : scores[p])
                if (v > scores[p][truth[p]]) ++higher;
            if (higher < n) ++hits;
        }
        CHECK(topNAccuracy(scores, truth, n) == doctest::Approx(hits / 200.0));
    }
    // monotone in N
    CHECK(topNAccuracy(scores, truth, 1) <= topNAccuracy(scores, truth, 2));
    CHECK(topNAccuracy(scores, truth, 2) <= topNAccuracy(scores, truth, 5));
}
