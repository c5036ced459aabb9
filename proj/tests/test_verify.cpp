#include <doctest.h>

#include <cmath>
#include <random>

#include "scriptrace/verify.hpp"

using namespace scriptrace;

TEST_CASE("distance: chi-square hand examples and symmetry") {
    CHECK(distance({1, 0}, {0, 1}, DistanceMeasure::chiSquare()) ==
          doctest::Approx(2.0));
    const std::vector<double> x{0.2, 0.5, 0.0, 0.3};
    CHECK(distance(x, x, DistanceMeasure::chiSquare()) == 0.0);

    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> a(16), b(16);
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        // term-by-term accumulation oracle
        double expect = 0.0;
        for (int i = 0; i < 16; ++i)
            if (a[i] + b[i] != 0.0)
                expect += (a[i] - b[i]) * (a[i] - b[i]) / (a[i] + b[i]);
        const double d = distance(a, b, DistanceMeasure::chiSquare());
        CHECK(d == doctest::Approx(expect).epsilon(1e-9));
        CHECK(d == distance(b, a, DistanceMeasure::chiSquare()));
        CHECK(d >= 0.0);
    }
}

TEST_CASE("distance: minkowski orders and euclidean cross-check") {
    CHECK(distance({0, 0}, {3, 4}, DistanceMeasure::minkowski(2)) ==
          doctest::Approx(5.0));
    CHECK(distance({0, 0}, {3, 4}, DistanceMeasure::minkowski(1)) ==
          doctest::Approx(7.0));
    CHECK(euclideanDw({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(euclideanDw({1, 2, 3}, {1, 2, 3}) == 0.0);

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> a(8), b(8);
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        CHECK(euclideanDw(a, b) ==
              doctest::Approx(distance(a, b, DistanceMeasure::minkowski(2))));
    }
}

TEST_CASE("distance: bhattacharyya and hausdorff basics") {
    // identical distributions -> BC = 1 -> distance 0
    CHECK(distance({0.5, 0.5}, {1.0, 1.0}, DistanceMeasure::bhattacharyya()) ==
          doctest::Approx(0.0));
    CHECK(distance({1, 0}, {0, 1}, DistanceMeasure::bhattacharyya()) > 10.0);
    CHECK_THROWS(distance({0, 0}, {1, 1}, DistanceMeasure::bhattacharyya()));

    // scalar-set reading: sets {0,10} vs {0,2} -> directed 8
    CHECK(distance({0, 10}, {0, 2}, DistanceMeasure::hausdorff()) ==
          doctest::Approx(8.0));
    CHECK(distance({5, 1}, {1, 5}, DistanceMeasure::hausdorff()) == 0.0);
}

TEST_CASE("distance: dimension mismatch throws") {
    CHECK_THROWS(distance({1, 2}, {1, 2, 3}, DistanceMeasure::minkowski(2)));
}

TEST_CASE("DistanceMeasure: name round trip") {
    for (const auto& n : {"minkowski1", "minkowski5", "bhattacharyya",
                          "chi-square", "hausdorff"}) {
        CHECK(DistanceMeasure::fromName(n).name() == n);
    }
    CHECK_THROWS(DistanceMeasure::fromName("minkowski9"));
    CHECK_THROWS(DistanceMeasure::fromName("cosine"));
}

TEST_CASE("farFrrCurve: perfectly separated populations") {
    const auto c = farFrrCurve({2.0, 2.5, 3.0}, {0.1, 0.2, 0.3});
    CHECK(c.eer == doctest::Approx(0.0));
    CHECK(c.accuracyPct == doctest::Approx(100.0));
}

TEST_CASE("farFrrCurve: identical multisets give EER 0.5") {
    const std::vector<double> d{0.1, 0.4, 0.7, 1.0};
    const auto c = farFrrCurve(d, d);
    CHECK(c.eer == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("farFrrCurve: monotone curves and analytic uniform overlap") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> us(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.5, 1.5);
    std::vector<double> same, diff;
    for (int i = 0; i < 1000; ++i) {
        same.push_back(us(rng));
        diff.push_back(ud(rng));
    }
    const auto c = farFrrCurve(diff, same);
    for (std::size_t i = 1; i < c.thresholds.size(); ++i) {
        CHECK(c.thresholds[i] > c.thresholds[i - 1]);
        CHECK(c.far[i] >= c.far[i - 1]);
        CHECK(c.frr[i] <= c.frr[i - 1]);
    }
    CHECK(c.eer == doctest::Approx(0.25).epsilon(0.12));
    CHECK(std::abs(c.eer - 0.25) <= 0.03);
    CHECK(c.accuracyPct == doctest::Approx((1.0 - c.eer) * 100.0));
    CHECK_THROWS(farFrrCurve({}, same));
}

TEST_CASE("contrastiveLoss: hand values") {
    CHECK(contrastiveLoss(2.0, 0, {0.5, 0.5, 1.0}) == doctest::Approx(2.0));
    CHECK(contrastiveLoss(3.5, 1, {0.5, 0.5, 3.0}) == 0.0);
    CHECK(contrastiveLoss(0.0, 1, {0.5, 0.5, 3.0}) == doctest::Approx(4.5));
}

TEST_CASE("defaultMargin: mean of squares") {
    CHECK(defaultMargin({1, 2, 3}) == doctest::Approx(14.0 / 3));
    CHECK(defaultMargin({0, 0, 0}) == 0.0);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0, 2);
    std::vector<double> vals(1000);
    double acc = 0.0;
    for (auto& v : vals) {
        v = u(rng);
        acc += v * v;
    }
    CHECK(defaultMargin(vals) == doctest::Approx(acc / 1000).epsilon(1e-12));
    CHECK_THROWS(defaultMargin({}));
}

TEST_CASE("thresholdSweep: separable pairs reach accuracy 1") {
    std::vector<PairDw> same{{"a", "b", 0.4}, {"a", "c", 0.9}, {"b", "c", 1.0}};
    std::vector<PairDw> diff{{"a", "x", 2.0}, {"b", "x", 2.4}, {"c", "x", 3.0}};
    const auto r = thresholdSweep(same, diff);
    CHECK(r.accuracy == doctest::Approx(1.0));
    CHECK(r.tpr == doctest::Approx(1.0));
    CHECK(r.tnr == doctest::Approx(1.0));
    CHECK(r.bestD >= 1.0);
    CHECK(r.bestD < 2.0);
}

TEST_CASE("thresholdSweep: chance level on identically distributed pairs") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0, 3);
    std::vector<PairDw> same, diff;
    for (int i = 0; i < 1000; ++i) {
        same.push_back({"s", "s", u(rng)});
        diff.push_back({"d", "d", u(rng)});
    }
    const auto r = thresholdSweep(same, diff);
    CHECK(r.accuracy >= 0.5);  // the trivial always-same classifier floor
    CHECK(r.accuracy <= 0.55);
}

TEST_CASE("thresholdSweep: equals the dense-grid oracle") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0, 4);
    std::vector<PairDw> same, diff;
    for (int i = 0; i < 25; ++i) same.push_back({"s", "s", u(rng)});
    for (int i = 0; i < 25; ++i) diff.push_back({"d", "d", u(rng)});
    const auto r = thresholdSweep(same, diff);

    double lo = 1e18, hi = -1e18;
    for (const auto& p : same) {
        lo = std::min(lo, p.dw);
        hi = std::max(hi, p.dw);
    }
    for (const auto& p : diff) {
        lo = std::min(lo, p.dw);
        hi = std::max(hi, p.dw);
    }
    double bestAcc = -1, bestD = 0;
    for (double d = lo; d <= hi + 1e-12; d += 0.1) {
        int tp = 0, tn = 0;
        for (const auto& p : same) tp += p.dw <= d;
        for (const auto& p : diff) tn += p.dw > d;
        const double acc =
            (static_cast<double>(tp) / same.size() +
             static_cast<double>(tn) / diff.size()) / 2.0;
        if (acc > bestAcc) {
            bestAcc = acc;
            bestD = d;
        }
    }
    CHECK(r.accuracy == doctest::Approx(bestAcc));
    CHECK(r.bestD == doctest::Approx(bestD));
    CHECK_THROWS(thresholdSweep({}, diff));
}
